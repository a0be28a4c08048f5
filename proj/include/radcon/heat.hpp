#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "radcon/fields.hpp"
#include "radcon/linalg.hpp"
#include "radcon/mesh.hpp"

namespace radcon {

enum class BoundaryFamily { dirichlet, neumann, robin };

inline const char* to_string(BoundaryFamily f) {
  switch (f) {
    case BoundaryFamily::dirichlet: return "dirichlet";
    case BoundaryFamily::neumann: return "neumann";
    default: return "robin";
  }
}

// Boundary condition a dn T + b T = g on every face of the box. The sign
// normalization a >= 0, b >= 0 is required by the discretization (it keeps
// the implicit system an M-matrix) and matches the sign structure under
// which non-negativity holds.
struct BoundarySpec {
  double a = 0.0;
  double b = 1.0;
  SpaceTimeFunction g = [](double, const Vec3&) { return 0.0; };

  BoundaryFamily family() const {
    if (a == 0.0) return BoundaryFamily::dirichlet;
    if (b == 0.0) return BoundaryFamily::neumann;
    return BoundaryFamily::robin;
  }

  void validate() const {
    if (std::abs(a) + std::abs(b) <= 0.0)
      throw std::invalid_argument("boundary: need |a| + |b| > 0");
    if (a < 0.0 || b < 0.0)
      throw std::invalid_argument("boundary: coefficients must be non-negative");
  }

  static BoundarySpec dirichlet(SpaceTimeFunction g, double b = 1.0) {
    return BoundarySpec{0.0, b, std::move(g)};
  }
  static BoundarySpec neumann(SpaceTimeFunction g, double a = 1.0) {
    return BoundarySpec{a, 0.0, std::move(g)};
  }
  static BoundarySpec robin(double a, double b, SpaceTimeFunction g) {
    return BoundarySpec{a, b, std::move(g)};
  }
};

struct HeatOptions {
  double newton_tol = 1e-10;   // relative nonlinear residual
  int newton_max_iter = 50;
  double positivity_tol = 1e-12;
  double cg_tol = 1e-10;
  int cg_max_iter = 100000;
};

namespace detail {

// Homogeneous part of the discrete Laplacian with ghost elimination of
// a dn T + b T = g: a boundary face contributes flux (g - b T_c)/(a + b h/2),
// so the homogeneous operator only adds b/((a + b h/2) h) to the diagonal.
inline void laplacian_homogeneous(const BoxMesh& mesh, double a, double b,
                                  const std::vector<double>& v,
                                  std::vector<double>& out) {
  const int nx = mesh.cells_per_axis(0);
  const int ny = mesh.cells_per_axis(1);
  const int nz = mesh.cells_per_axis(2);
  const int dim = mesh.dim();
  double inv_h2[3] = {0.0, 0.0, 0.0};
  double bcoef[3] = {0.0, 0.0, 0.0};
  for (int ax = 0; ax < dim; ++ax) {
    const double h = mesh.spacing(ax);
    inv_h2[ax] = 1.0 / (h * h);
    bcoef[ax] = b / ((a + 0.5 * b * h) * h);
  }
  const std::ptrdiff_t sx = 1;
  const std::ptrdiff_t sy = nx;
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(nx) * ny;

  std::size_t c = 0;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i, ++c) {
        double acc = 0.0;
        const double vc = v[c];
        if (i > 0) acc += (v[c - sx] - vc) * inv_h2[0];
        else acc -= bcoef[0] * vc;
        if (i < nx - 1) acc += (v[c + sx] - vc) * inv_h2[0];
        else acc -= bcoef[0] * vc;
        if (dim >= 2) {
          if (j > 0) acc += (v[c - sy] - vc) * inv_h2[1];
          else acc -= bcoef[1] * vc;
          if (j < ny - 1) acc += (v[c + sy] - vc) * inv_h2[1];
          else acc -= bcoef[1] * vc;
        }
        if (dim >= 3) {
          if (k > 0) acc += (v[c - sz] - vc) * inv_h2[2];
          else acc -= bcoef[2] * vc;
          if (k < nz - 1) acc += (v[c + sz] - vc) * inv_h2[2];
          else acc -= bcoef[2] * vc;
        }
        out[c] = acc;
      }
    }
  }
}

// Boundary-data contribution of the discrete Laplacian at time t.
inline std::vector<double> boundary_source(const BoxMesh& mesh, const BoundarySpec& bc,
                                           double t) {
  std::vector<double> s(mesh.cell_count(), 0.0);
  for (const auto& f : mesh.boundary_faces()) {
    const double h = mesh.spacing(f.axis);
    s[f.cell] += bc.g(t, f.center) / ((bc.a + 0.5 * bc.b * h) * h);
  }
  return s;
}

}  // namespace detail

// Full discrete Laplacian including boundary data, exposed for residual
// checks and diagnostics.
inline std::vector<double> discrete_laplacian(const std::vector<double>& T,
                                              const BoundarySpec& bc, double t,
                                              const BoxMesh& mesh) {
  std::vector<double> out(T.size());
  detail::laplacian_homogeneous(mesh, bc.a, bc.b, T, out);
  const auto s = detail::boundary_source(mesh, bc, t);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] += s[c];
  return out;
}

// One backward-Euler step of dT/dt - Lap T = F(T) with the truncated
// nonlinearity F(T) = theta(G - 4 pi max(T,0)^4) + extra. Newton with the
// positive-semidefinite Jacobian contribution 16 pi theta max(T,0)^3 keeps
// the linear system an M-matrix, so the converged step is non-negative for
// non-negative data up to the nonlinear tolerance.
inline TemperatureField heat_step(const TemperatureField& T_prev,
                                  const std::vector<double>& incident,
                                  const BoundarySpec& bc, double theta, double t_new,
                                  double dt, const BoxMesh& mesh,
                                  const HeatOptions& opt = {},
                                  const std::vector<double>* extra_source = nullptr) {
  bc.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("heat_step: dt must be positive");
  if (theta < 0.0) throw std::invalid_argument("heat_step: theta must be >= 0");
  const std::size_t n = mesh.cell_count();
  if (T_prev.size() != n || incident.size() != n)
    throw std::invalid_argument("heat_step: field size mismatch");
  if (min_value(T_prev.values) < 0.0)
    throw std::invalid_argument("heat_step: negative previous temperature");
  if (min_value(incident) < 0.0)
    throw std::invalid_argument("heat_step: negative incident radiation");

  const double inv_dt = 1.0 / dt;
  const double pi4t = 4.0 * std::numbers::pi * theta;

  // rhs = T_prev/dt + theta G + boundary data + extra source.
  std::vector<double> rhs = detail::boundary_source(mesh, bc, t_new);
  for (std::size_t c = 0; c < n; ++c) {
    rhs[c] += inv_dt * T_prev.values[c] + theta * incident[c];
    if (extra_source) rhs[c] += (*extra_source)[c];
  }
  const double scale = std::sqrt(dot_product(rhs, rhs));
  if (!std::isfinite(scale)) throw SolverError("heat_step: non-finite data");

  std::vector<double> T = T_prev.values;
  std::vector<double> lap(n), residual(n), jac_diag(n), delta(n), trial(n), lap_trial(n);

  auto eval_residual = [&](const std::vector<double>& Tv, std::vector<double>& lap_buf,
                           std::vector<double>& res) {
    detail::laplacian_homogeneous(mesh, bc.a, bc.b, Tv, lap_buf);
    for (std::size_t c = 0; c < n; ++c) {
      const double tp = Tv[c] > 0.0 ? Tv[c] : 0.0;
      res[c] = inv_dt * Tv[c] - lap_buf[c] + pi4t * tp * tp * tp * tp - rhs[c];
    }
  };

  eval_residual(T, lap, residual);
  double res_norm = std::sqrt(dot_product(residual, residual));
  std::vector<double> history{res_norm};

  int it = 0;
  while (res_norm > opt.newton_tol * std::max(scale, 1e-300)) {
    if (!std::isfinite(res_norm))
      throw SolverError("heat_step: nonlinear residual became non-finite");
    if (++it > opt.newton_max_iter) {
      std::ostringstream msg;
      msg << "heat_step: Newton failed to converge; residuals:";
      for (double r : history) msg << ' ' << r;
      throw SolverError(msg.str());
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double tp = T[c] > 0.0 ? T[c] : 0.0;
      jac_diag[c] = 4.0 * pi4t * tp * tp * tp;
    }
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
      detail::laplacian_homogeneous(mesh, bc.a, bc.b, v, out);
      for (std::size_t c = 0; c < n; ++c)
        out[c] = inv_dt * v[c] - out[c] + jac_diag[c] * v[c];
    };
    std::vector<double> neg_res(n);
    for (std::size_t c = 0; c < n; ++c) neg_res[c] = -residual[c];
    std::fill(delta.begin(), delta.end(), 0.0);
    const CgResult cg = conjugate_gradient(apply, neg_res, delta, opt.cg_tol,
                                           opt.cg_max_iter);
    if (!cg.converged)
      throw SolverError("heat_step: conjugate gradient failed to converge");

    // Backtracking on the residual norm guards the rare over-shooting step.
    double step = 1.0;
    double trial_norm = res_norm;
    for (int ls = 0; ls < 30; ++ls) {
      for (std::size_t c = 0; c < n; ++c) trial[c] = T[c] + step * delta[c];
      eval_residual(trial, lap_trial, residual);
      trial_norm = std::sqrt(dot_product(residual, residual));
      if (trial_norm <= res_norm * (1.0 - 1e-4 * step) || trial_norm < opt.newton_tol * std::max(scale, 1e-300))
        break;
      step *= 0.5;
    }
    T.swap(trial);
    res_norm = trial_norm;
    history.push_back(res_norm);
  }

  TemperatureField out(n);
  out.values = std::move(T);
  const double m = min_value(out.values);
  if (m < -opt.positivity_tol) {
    std::ostringstream msg;
    msg << "heat_step: positivity violated beyond tolerance (min " << m << ")";
    throw SolverError(msg.str());
  }
  for (double& v : out.values) v = v < 0.0 ? 0.0 : v;
  if (!all_finite(out.values)) throw SolverError("heat_step: non-finite temperature");
  return out;
}

// Advances the full trajectory. `incident` holds G at every time level
// 0..steps; step n consumes level n+1 (backward Euler evaluates the source
// implicitly).
inline TemperatureHistory solve_heat(const TemperatureField& T0,
                                     const IncidentHistory& incident,
                                     const BoundarySpec& bc, double theta,
                                     const TimeGrid& tg, const BoxMesh& mesh,
                                     const HeatOptions& opt = {},
                                     const SpaceTimeFunction* extra_source = nullptr) {
  if (incident.size() != static_cast<std::size_t>(tg.levels()))
    throw std::invalid_argument("solve_heat: incident history must cover all levels");
  TemperatureHistory hist;
  hist.reserve(tg.levels());
  hist.push_back(T0);
  std::vector<double> src;
  for (int nstep = 0; nstep < tg.steps; ++nstep) {
    const double t_new = tg.time(nstep + 1);
    const std::vector<double>* src_ptr = nullptr;
    if (extra_source) {
      src.resize(mesh.cell_count());
      for (std::size_t c = 0; c < src.size(); ++c)
        src[c] = (*extra_source)(t_new, mesh.cell_center(c));
      src_ptr = &src;
    }
    try {
      hist.push_back(heat_step(hist.back(), incident[nstep + 1], bc, theta, t_new,
                               tg.dt(), mesh, opt, src_ptr));
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << "solve_heat: step " << nstep + 1 << " failed: " << e.what();
      throw SolverError(msg.str());
    }
  }
  return hist;
}

}  // namespace radcon
