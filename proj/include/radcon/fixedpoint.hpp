#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "radcon/fields.hpp"
#include "radcon/heat.hpp"
#include "radcon/mesh.hpp"
#include "radcon/norms.hpp"
#include "radcon/parallel.hpp"
#include "radcon/quadrature.hpp"
#include "radcon/transport.hpp"

namespace radcon {

struct PicardOptions {
  double tol = 1e-8;  // relative residual in the space-time surrogate norm
  int max_iter = 200;
  enum class Mode { global, stepwise } mode = Mode::stepwise;
};

inline const char* to_string(PicardOptions::Mode m) {
  return m == PicardOptions::Mode::global ? "global" : "stepwise";
}

struct ScenarioConfig {
  BoxMesh mesh;
  TimeGrid time;
  AngularQuadrature quadrature{};
  BoundarySpec bc{};
  InflowData inflow = InflowData::zero();
  double theta = 1.0;
  TemperatureField initial{};
  PicardOptions picard{};
  HeatOptions heat{};

  void validate() const {
    bc.validate();
    if (quadrature.dim != mesh.dim())
      throw std::invalid_argument("scenario: quadrature/mesh dimension mismatch");
    if (initial.size() != mesh.cell_count())
      throw std::invalid_argument("scenario: initial field size mismatch");
    if (!all_finite(initial.values) || min_value(initial.values) < 0.0)
      throw std::invalid_argument("scenario: initial temperature must be >= 0 and finite");
    if (theta < 0.0) throw std::invalid_argument("scenario: theta must be >= 0");
    if (!(picard.tol > 0.0) || picard.max_iter < 1)
      throw std::invalid_argument("scenario: invalid picard settings");
  }
};

// Scales the problem data (initial temperature, boundary datum, inflow) by s,
// leaving the discretization untouched.
inline ScenarioConfig scaled_data(const ScenarioConfig& cfg, double s) {
  ScenarioConfig out = cfg;
  for (double& v : out.initial.values) v *= s;
  const SpaceTimeFunction g = cfg.bc.g;
  out.bc.g = [g, s](double t, const Vec3& x) { return s * g(t, x); };
  const InflowData ib = cfg.inflow;
  out.inflow.value = [ib, s](double t, const Vec3& x, const Vec3& beta) {
    return s * ib(t, x, beta);
  };
  return out;
}

struct PicardIteration {
  int index = 0;             // 1-based
  double residual = 0.0;     // surrogate-norm distance between iterates
  double relative_residual = 0.0;
  double ratio = std::numeric_limits<double>::quiet_NaN();  // recorded for index >= 2
  NormLedger ledger;
};

struct PicardTrace {
  std::string mode;
  bool converged = false;
  std::vector<PicardIteration> iterations;     // global mode
  std::vector<int> step_inner_iterations;      // stepwise mode
  std::string note;
};

struct CoupledSolution {
  TemperatureHistory temperature;
  RadiationHistory radiation;
  IncidentHistory incident;
  PicardTrace trace;
  bool converged = false;
  // Discrete residuals of the coupled system evaluated on the final state.
  double transport_residual = 0.0;
  double heat_residual = 0.0;
  double heat_residual_rel = 0.0;  // heat_residual * dt / max(|T|, 1)
};

// H2 o H1: emission and transport solve at every time level. The sweeps are
// independent across both levels and ordinates, so they form one task pool;
// the angular reductions stay serial ascending sums.
inline void transport_stage(const TemperatureHistory& T, const ScenarioConfig& cfg,
                            const Parallel& par, RadiationHistory& radiation,
                            IncidentHistory& incident) {
  const std::size_t levels = T.size();
  const std::size_t ordinates = cfg.quadrature.size();
  std::vector<EmissionField> sources;
  sources.reserve(levels);
  for (const auto& lvl : T) sources.push_back(emission(lvl));

  radiation.assign(levels, RadiationField(cfg.mesh.cell_count(), ordinates));
  par.run_tasks(levels * ordinates, [&](std::size_t task) {
    const std::size_t n = task / ordinates;
    const std::size_t m = task % ordinates;
    sweep_ordinate(sources[n].values, cfg.inflow, cfg.time.time(static_cast<int>(n)),
                   cfg.quadrature.directions[m], cfg.mesh, radiation[n].slice(m));
  });
  incident.clear();
  incident.reserve(levels);
  for (std::size_t n = 0; n < levels; ++n)
    incident.push_back(incident_radiation(radiation[n], cfg.quadrature));
}

struct HApplication {
  TemperatureHistory temperature;
  RadiationHistory radiation;  // transport of the *input* history
  IncidentHistory incident;
};

// The composed map H = H3 o H2 o H1 acting on a temperature history.
inline HApplication apply_H(const TemperatureHistory& T, const ScenarioConfig& cfg,
                            const Parallel& par = Parallel{}) {
  if (T.size() != static_cast<std::size_t>(cfg.time.levels()))
    throw std::invalid_argument("apply_H: history/grid level mismatch");
  HApplication app;
  transport_stage(T, cfg, par, app.radiation, app.incident);
  app.temperature = solve_heat(cfg.initial, app.incident, cfg.bc, cfg.theta,
                               cfg.time, cfg.mesh, cfg.heat);
  return app;
}

inline NormLedger build_norm_ledger(const TemperatureHistory& T,
                                    const RadiationHistory& I,
                                    const IncidentHistory& G,
                                    const ScenarioConfig& cfg) {
  NormLedger ledger;
  const TimeGrid& tg = cfg.time;
  std::vector<double> l2x, wI, l2m;
  for (std::size_t n = 0; n < I.size(); ++n) {
    const double t = tg.time(static_cast<int>(n));
    l2x.push_back(l2_norm_X(I[n], cfg.mesh, cfg.quadrature));
    wI.push_back(transport_graph_norm(I[n], cfg.inflow, t, cfg.mesh, cfg.quadrature));
    l2m.push_back(l2_trace_minus(cfg.inflow, t, cfg.mesh, cfg.quadrature));
  }
  ledger.add("L2t_L2X_I", time_l2(l2x, tg.dt()));
  ledger.add("L2t_W_I", time_l2(wI, tg.dt()));
  ledger.add("L2t_L2minus_Ib", time_l2(l2m, tg.dt()));
  ledger.add("L2Q_G", l2_norm_Q(G, cfg.mesh, tg));
  ledger.add("L2Q_T", lp_norm_Q(T, cfg.mesh, tg, 2.0));
  ledger.add("L8Q_T", lp_norm_Q(T, cfg.mesh, tg, 8.0));
  ledger.add("L5_Omega_T0", lp_norm_omega(T.front().values, cfg.mesh, 5.0));
  ledger.add("L5_Omega_T_final", lp_norm_omega(T.back().values, cfg.mesh, 5.0));
  ledger.add("H1_Omega_T0", h1_norm_omega(T.front().values, cfg.mesh));
  ledger.add("sup_g", sup_norm_g(cfg.bc, cfg.mesh, tg));
  ledger.add("L2Sigma_g", l2_sigma_norm_g(cfg.bc, cfg.mesh, tg));
  ledger.add("W21_T", w21_surrogate_norm(T, cfg.mesh, tg));
  return ledger;
}

namespace detail {

// Discrete residuals of the coupled system on a final state.
inline void coupled_residuals(CoupledSolution& sol, const ScenarioConfig& cfg) {
  const BoxMesh& mesh = cfg.mesh;
  const std::size_t n = mesh.cell_count();
  double tres = 0.0;
  std::vector<double> deriv(n);
  for (std::size_t lvl = 0; lvl < sol.temperature.size(); ++lvl) {
    const double t = cfg.time.time(static_cast<int>(lvl));
    const EmissionField q = emission(sol.temperature[lvl]);
    for (std::size_t m = 0; m < cfg.quadrature.size(); ++m) {
      const double* I = sol.radiation[lvl].slice(m);
      directional_derivative(I, cfg.inflow, t, cfg.quadrature.directions[m], mesh,
                             deriv.data());
      for (std::size_t c = 0; c < n; ++c)
        tres = std::max(tres, std::abs(deriv[c] + I[c] - q.values[c]));
    }
  }
  sol.transport_residual = tres;

  double hres = 0.0;
  double tmax = 0.0;
  const double dt = cfg.time.dt();
  const double pi4t = 4.0 * std::numbers::pi * cfg.theta;
  for (int step = 0; step < cfg.time.steps; ++step) {
    const auto& Tn = sol.temperature[step].values;
    const auto& Tn1 = sol.temperature[step + 1].values;
    const auto lap = discrete_laplacian(Tn1, cfg.bc, cfg.time.time(step + 1), mesh);
    const auto& G = sol.incident[step + 1];
    for (std::size_t c = 0; c < n; ++c) {
      const double tp = Tn1[c] > 0.0 ? Tn1[c] : 0.0;
      const double r = (Tn1[c] - Tn[c]) / dt - lap[c] + pi4t * tp * tp * tp * tp -
                       cfg.theta * G[c];
      hres = std::max(hres, std::abs(r));
      tmax = std::max(tmax, std::abs(Tn1[c]));
    }
  }
  sol.heat_residual = hres;
  sol.heat_residual_rel = hres * dt / std::max(tmax, 1.0);
}

}  // namespace detail

inline TemperatureHistory constant_in_time(const TemperatureField& T0, int levels) {
  return TemperatureHistory(static_cast<std::size_t>(levels), T0);
}

// Picard iteration T <- H(T). Global mode iterates on the whole space-time
// history (the object the contraction argument is about); stepwise mode
// converges the coupling inside each time step before advancing.
inline CoupledSolution picard_solve(const ScenarioConfig& cfg,
                                    const Parallel& par = Parallel{},
                                    const TemperatureHistory* initial_guess = nullptr) {
  cfg.validate();
  CoupledSolution sol;
  sol.trace.mode = to_string(cfg.picard.mode);

  if (cfg.picard.mode == PicardOptions::Mode::global) {
    TemperatureHistory T_cur = initial_guess
                                   ? *initial_guess
                                   : constant_in_time(cfg.initial, cfg.time.levels());
    RadiationHistory I_cur;
    IncidentHistory G_cur;
    try {
      transport_stage(T_cur, cfg, par, I_cur, G_cur);
    } catch (const SolverError& e) {
      sol.trace.note = std::string("picard: initial transport stage failed: ") + e.what();
      sol.temperature = std::move(T_cur);
      sol.trace.converged = false;
      return sol;
    }
    double prev_res = std::numeric_limits<double>::quiet_NaN();
    for (int k = 1; k <= cfg.picard.max_iter; ++k) {
      TemperatureHistory T_new;
      RadiationHistory I_new;
      IncidentHistory G_new;
      try {
        T_new = solve_heat(cfg.initial, G_cur, cfg.bc, cfg.theta, cfg.time, cfg.mesh,
                           cfg.heat);
        transport_stage(T_new, cfg, par, I_new, G_new);
      } catch (const SolverError& e) {
        std::ostringstream msg;
        msg << "picard iteration " << k << ": " << e.what();
        sol.trace.note = msg.str();
        break;
      }
      const double res =
          w21_surrogate_norm(history_difference(T_new, T_cur), cfg.mesh, cfg.time);
      if (!std::isfinite(res)) {
        sol.trace.note = "picard: residual diverged to non-finite values";
        break;
      }

      PicardIteration rec;
      rec.index = k;
      rec.residual = res;
      const double norm_new = w21_surrogate_norm(T_new, cfg.mesh, cfg.time);
      rec.relative_residual = res / std::max(norm_new, 1e-30);
      if (k >= 2) rec.ratio = res / prev_res;
      rec.ledger = build_norm_ledger(T_new, I_new, G_new, cfg);
      sol.trace.iterations.push_back(std::move(rec));
      prev_res = res;

      T_cur = std::move(T_new);
      I_cur = std::move(I_new);
      G_cur = std::move(G_new);
      if (sol.trace.iterations.back().relative_residual <= cfg.picard.tol) {
        sol.converged = true;
        break;
      }
    }
    sol.temperature = std::move(T_cur);
    sol.radiation = std::move(I_cur);
    sol.incident = std::move(G_cur);
  } else {
    const std::size_t cells = cfg.mesh.cell_count();
    TemperatureHistory T;
    T.push_back(cfg.initial);
    bool ok = true;
    for (int step = 0; step < cfg.time.steps && ok; ++step) {
      const double t_new = cfg.time.time(step + 1);
      TemperatureField guess = T.back();
      int inner = 0;
      bool step_ok = false;
      for (inner = 1; inner <= cfg.picard.max_iter; ++inner) {
        TemperatureField next;
        try {
          const RadiationField I =
              solve_rte(guess, cfg.inflow, t_new, cfg.quadrature, cfg.mesh, par);
          const std::vector<double> G = incident_radiation(I, cfg.quadrature);
          next = heat_step(T.back(), G, cfg.bc, cfg.theta, t_new, cfg.time.dt(),
                           cfg.mesh, cfg.heat);
        } catch (const SolverError& e) {
          std::ostringstream msg;
          msg << "picard step " << step + 1 << " inner " << inner << ": " << e.what();
          sol.trace.note = msg.str();
          ok = false;
          break;
        }
        std::vector<double> diff(cells);
        for (std::size_t c = 0; c < cells; ++c)
          diff[c] = next.values[c] - guess.values[c];
        const double res = l2_norm_omega(diff, cfg.mesh);
        const double scale = std::max(l2_norm_omega(next.values, cfg.mesh), 1e-30);
        guess = std::move(next);
        if (res <= cfg.picard.tol * scale) {
          step_ok = true;
          break;
        }
        if (!std::isfinite(res)) {
          sol.trace.note = "picard: stepwise residual diverged";
          ok = false;
          break;
        }
      }
      sol.trace.step_inner_iterations.push_back(inner);
      if (!step_ok) {
        if (ok && sol.trace.note.empty()) {
          std::ostringstream msg;
          msg << "picard: step " << step + 1 << " did not converge in "
              << cfg.picard.max_iter << " inner iterations";
          sol.trace.note = msg.str();
        }
        ok = false;
        break;
      }
      T.push_back(std::move(guess));
    }
    sol.converged = ok;
    if (!ok) {
      // Pad with the last state so the history stays well-formed for output.
      while (T.size() < static_cast<std::size_t>(cfg.time.levels()))
        T.push_back(T.back());
    }
    try {
      transport_stage(T, cfg, par, sol.radiation, sol.incident);
    } catch (const SolverError&) {
      sol.radiation.assign(T.size(),
                           RadiationField(cfg.mesh.cell_count(), cfg.quadrature.size()));
      sol.incident.assign(T.size(), std::vector<double>(cfg.mesh.cell_count(), 0.0));
    }
    sol.temperature = std::move(T);
  }

  sol.trace.converged = sol.converged;
  if (sol.converged) detail::coupled_residuals(sol, cfg);
  return sol;
}

// Measured contraction data for one pair of histories.
struct ContractionMeasurement {
  double ratio = 0.0;          // |H(T1) - H(T2)| / |T1 - T2| in the surrogate norm
  double holder_factor = 0.0;  // Holder-split bound factor for the ledger
};

inline ContractionMeasurement contraction_ratio(const TemperatureHistory& T1,
                                                const TemperatureHistory& T2,
                                                const ScenarioConfig& cfg,
                                                const Parallel& par = Parallel{}) {
  const double denom =
      w21_surrogate_norm(history_difference(T1, T2), cfg.mesh, cfg.time);
  if (denom == 0.0)
    throw std::invalid_argument("contraction_ratio: identical inputs");
  const HApplication H1 = apply_H(T1, cfg, par);
  const HApplication H2 = apply_H(T2, cfg, par);
  ContractionMeasurement m;
  m.ratio = w21_surrogate_norm(
                history_difference(H1.temperature, H2.temperature), cfg.mesh,
                cfg.time) /
            denom;

  // |T1-T2|_L8 |T1+T2|_L8 |T1^2+T2^2|_L4 / |T1-T2|_W21.
  TemperatureHistory diff = history_difference(T1, T2);
  TemperatureHistory sum = T1;
  TemperatureHistory sumsq = T1;
  for (std::size_t n = 0; n < T1.size(); ++n)
    for (std::size_t c = 0; c < T1[n].size(); ++c) {
      sum[n].values[c] = T1[n].values[c] + T2[n].values[c];
      sumsq[n].values[c] =
          T1[n].values[c] * T1[n].values[c] + T2[n].values[c] * T2[n].values[c];
    }
  m.holder_factor = lp_norm_Q(diff, cfg.mesh, cfg.time, 8.0) *
                    lp_norm_Q(sum, cfg.mesh, cfg.time, 8.0) *
                    lp_norm_Q(sumsq, cfg.mesh, cfg.time, 4.0) / denom;
  return m;
}

struct GeometricFit {
  double rho = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

// Least-squares fit of log(residual) against the iteration index, starting
// at `from` (1-based), skipping residuals at the roundoff floor.
inline GeometricFit fit_geometric_decay(const PicardTrace& trace, int from = 3) {
  std::vector<double> xs, ys;
  for (const auto& it : trace.iterations) {
    if (it.index < from) continue;
    if (!(it.residual > 0.0) || !std::isfinite(it.residual)) continue;
    xs.push_back(static_cast<double>(it.index));
    ys.push_back(std::log(it.residual));
  }
  GeometricFit fit;
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 2) return fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double n = static_cast<double>(xs.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  fit.rho = std::exp(slope);
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = intercept + slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace radcon
