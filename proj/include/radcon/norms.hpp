#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "radcon/fields.hpp"
#include "radcon/heat.hpp"
#include "radcon/mesh.hpp"
#include "radcon/quadrature.hpp"
#include "radcon/transport.hpp"

// Discrete norms: midpoint rule in space (cell value times cell volume),
// left-endpoint rule in time. All sums run in ascending index order.

namespace radcon {

inline double lp_norm_omega(const std::vector<double>& f, const BoxMesh& mesh,
                            double p) {
  const double V = mesh.cell_volume();
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), p) * V;
  return std::pow(s, 1.0 / p);
}

inline double l2_norm_omega(const std::vector<double>& f, const BoxMesh& mesh) {
  const double V = mesh.cell_volume();
  double s = 0.0;
  for (double v : f) s += v * v * V;
  return std::sqrt(s);
}

// Interior-face gradient seminorm squared.
inline double h1_seminorm_sq_omega(const std::vector<double>& f, const BoxMesh& mesh) {
  const int nx = mesh.cells_per_axis(0);
  const int ny = mesh.cells_per_axis(1);
  const int nz = mesh.cells_per_axis(2);
  const double V = mesh.cell_volume();
  double s = 0.0;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = mesh.index(i, j, k);
        if (i + 1 < nx) {
          const double d = (f[mesh.index(i + 1, j, k)] - f[c]) / mesh.spacing(0);
          s += d * d * V;
        }
        if (j + 1 < ny) {
          const double d = (f[mesh.index(i, j + 1, k)] - f[c]) / mesh.spacing(1);
          s += d * d * V;
        }
        if (k + 1 < nz) {
          const double d = (f[mesh.index(i, j, k + 1)] - f[c]) / mesh.spacing(2);
          s += d * d * V;
        }
      }
  return s;
}

inline double h1_norm_omega(const std::vector<double>& f, const BoxMesh& mesh) {
  const double l2 = l2_norm_omega(f, mesh);
  return std::sqrt(l2 * l2 + h1_seminorm_sq_omega(f, mesh));
}

inline double l2_norm_X(const RadiationField& I, const BoxMesh& mesh,
                        const AngularQuadrature& quad) {
  const double V = mesh.cell_volume();
  double s = 0.0;
  for (std::size_t m = 0; m < quad.size(); ++m) {
    const double* slice = I.slice(m);
    double sm = 0.0;
    for (std::size_t c = 0; c < I.cells; ++c) sm += slice[c] * slice[c];
    s += quad.weights[m] * sm * V;
  }
  return std::sqrt(s);
}

// Outflow trace norm; the discrete boundary value of an ordinate on an
// outflow face is the adjacent (upwind) cell value.
inline double l2_trace_plus(const RadiationField& I, const BoxMesh& mesh,
                            const AngularQuadrature& quad) {
  double s = 0.0;
  for (std::size_t m = 0; m < quad.size(); ++m) {
    const Vec3& beta = quad.directions[m];
    const double* slice = I.slice(m);
    double sm = 0.0;
    for (const auto& f : mesh.boundary_faces()) {
      const double bn = dot(beta, f.normal);
      if (bn > 0.0) sm += bn * slice[f.cell] * slice[f.cell] * f.area;
    }
    s += quad.weights[m] * sm;
  }
  return std::sqrt(s);
}

// Inflow trace norm of prescribed boundary data at one time level.
inline double l2_trace_minus(const InflowData& inflow, double t, const BoxMesh& mesh,
                             const AngularQuadrature& quad) {
  double s = 0.0;
  for (std::size_t m = 0; m < quad.size(); ++m) {
    const Vec3& beta = quad.directions[m];
    double sm = 0.0;
    for (const auto& f : mesh.boundary_faces()) {
      const double bn = dot(beta, f.normal);
      if (bn < 0.0) {
        const double v = inflow(t, f.center, beta);
        sm += (-bn) * v * v * f.area;
      }
    }
    s += quad.weights[m] * sm;
  }
  return std::sqrt(s);
}

// Transport-adapted norm: L2(X) of the intensity, of its upwind streaming
// derivative, and the outflow trace.
inline double transport_graph_norm(const RadiationField& I, const InflowData& inflow,
                                   double t, const BoxMesh& mesh,
                                   const AngularQuadrature& quad) {
  const double V = mesh.cell_volume();
  std::vector<double> deriv(I.cells);
  double s = 0.0;
  for (std::size_t m = 0; m < quad.size(); ++m) {
    const double* slice = I.slice(m);
    directional_derivative(slice, inflow, t, quad.directions[m], mesh, deriv.data());
    double sm = 0.0;
    for (std::size_t c = 0; c < I.cells; ++c)
      sm += (slice[c] * slice[c] + deriv[c] * deriv[c]) * V;
    s += quad.weights[m] * sm;
  }
  const double tr = l2_trace_plus(I, mesh, quad);
  return std::sqrt(s + tr * tr);
}

// Left-endpoint composite in time of per-level scalars v_0..v_N.
inline double time_l2(const std::vector<double>& levels, double dt) {
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < levels.size(); ++n) s += levels[n] * levels[n] * dt;
  return std::sqrt(s);
}

inline double lp_norm_Q(const TemperatureHistory& T, const BoxMesh& mesh,
                        const TimeGrid& tg, double p) {
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < T.size(); ++n)
    s += std::pow(lp_norm_omega(T[n].values, mesh, p), p) * tg.dt();
  return std::pow(s, 1.0 / p);
}

inline double l2_norm_Q(const IncidentHistory& G, const BoxMesh& mesh,
                        const TimeGrid& tg) {
  std::vector<double> lv;
  lv.reserve(G.size());
  for (const auto& g : G) lv.push_back(l2_norm_omega(g, mesh));
  return time_l2(lv, tg.dt());
}

// Discrete surrogate of the parabolic space-time norm: L2 norms of the
// field, its face gradient, its zero-flux interior Laplacian and its
// backward time difference over the cylinder.
inline double w21_surrogate_norm(const TemperatureHistory& T, const BoxMesh& mesh,
                                 const TimeGrid& tg) {
  if (T.size() != static_cast<std::size_t>(tg.levels()))
    throw std::invalid_argument("w21_surrogate_norm: history/grid mismatch");
  const double dt = tg.dt();
  const double V = mesh.cell_volume();
  double s = 0.0;
  std::vector<double> lap(mesh.cell_count());
  for (int n = 0; n < tg.steps; ++n) {
    const auto& u = T[n].values;
    double level = 0.0;
    for (double v : u) level += v * v * V;
    level += h1_seminorm_sq_omega(u, mesh);
    detail::laplacian_homogeneous(mesh, 1.0, 0.0, u, lap);
    for (double v : lap) level += v * v * V;
    const auto& unext = T[n + 1].values;
    for (std::size_t c = 0; c < u.size(); ++c) {
      const double d = (unext[c] - u[c]) / dt;
      level += d * d * V;
    }
    s += level * dt;
  }
  return std::sqrt(s);
}

inline TemperatureHistory history_difference(const TemperatureHistory& A,
                                             const TemperatureHistory& B) {
  if (A.size() != B.size())
    throw std::invalid_argument("history_difference: level count mismatch");
  TemperatureHistory d;
  d.reserve(A.size());
  for (std::size_t n = 0; n < A.size(); ++n) {
    TemperatureField f(A[n].size());
    for (std::size_t c = 0; c < f.size(); ++c)
      f.values[c] = A[n].values[c] - B[n].values[c];
    d.push_back(std::move(f));
  }
  return d;
}

// Boundary-surface norms of the conductive boundary datum.
inline double l2_sigma_norm_g(const BoundarySpec& bc, const BoxMesh& mesh,
                              const TimeGrid& tg) {
  std::vector<double> lv;
  lv.reserve(tg.levels());
  for (int n = 0; n < tg.levels(); ++n) {
    double s = 0.0;
    for (const auto& f : mesh.boundary_faces()) {
      const double v = bc.g(tg.time(n), f.center);
      s += v * v * f.area;
    }
    lv.push_back(std::sqrt(s));
  }
  return time_l2(lv, tg.dt());
}

inline double sup_norm_g(const BoundarySpec& bc, const BoxMesh& mesh,
                         const TimeGrid& tg) {
  double m = 0.0;
  for (int n = 0; n < tg.levels(); ++n)
    for (const auto& f : mesh.boundary_faces())
      m = std::max(m, std::abs(bc.g(tg.time(n), f.center)));
  return m;
}

// Ordered list of named scalars; insertion order is fixed by the producer so
// serialized ledgers are deterministic.
struct NormLedger {
  std::vector<std::pair<std::string, double>> entries;

  void add(std::string name, double value) {
    entries.emplace_back(std::move(name), value);
  }
  double get(const std::string& name) const {
    for (const auto& [k, v] : entries)
      if (k == name) return v;
    throw std::invalid_argument("NormLedger: no entry " + name);
  }
  bool has(const std::string& name) const {
    for (const auto& [k, v] : entries)
      if (k == name) return true;
    return false;
  }
};

}  // namespace radcon
