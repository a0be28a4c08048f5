#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "radcon/fields.hpp"
#include "radcon/mesh.hpp"
#include "radcon/parallel.hpp"
#include "radcon/quadrature.hpp"

namespace radcon {

// Pointwise fourth power. Rejects negative input: a negative temperature
// here means an upstream positivity violation.
inline EmissionField emission(const TemperatureField& T) {
  EmissionField e(T.size());
  for (std::size_t c = 0; c < T.size(); ++c) {
    const double v = T.values[c];
    if (v < 0.0)
      throw std::invalid_argument("emission: negative temperature");
    e.values[c] = v * v * v * v;
    if (!std::isfinite(e.values[c]))
      throw SolverError("emission: fourth power overflowed");
  }
  return e;
}

// One upwind finite-volume sweep for beta.grad I + I = source with inflow
// value from `inflow`. The cell update is
//   I_c = (source_c + sum_a (|beta_a|/h_a) I_up,a) / (1 + sum_a |beta_a|/h_a),
// solved in a single pass ordered downwind per axis. All coefficients are
// non-negative, so non-negative data yields a non-negative intensity.
inline void sweep_ordinate(const std::vector<double>& source,
                           const InflowData& inflow, double t, const Vec3& beta,
                           const BoxMesh& mesh, double* out) {
  if (source.size() != mesh.cell_count())
    throw std::invalid_argument("sweep_ordinate: source size mismatch");
  const int nx = mesh.cells_per_axis(0);
  const int ny = mesh.cells_per_axis(1);
  const int nz = mesh.cells_per_axis(2);
  const double hx = mesh.spacing(0);
  const double hy = mesh.spacing(1);
  const double hz = mesh.spacing(2);

  const double cx = std::abs(beta[0]) / hx;
  const double cy = mesh.dim() >= 2 ? std::abs(beta[1]) / hy : 0.0;
  const double cz = mesh.dim() >= 3 ? std::abs(beta[2]) / hz : 0.0;
  const double denom = 1.0 + cx + cy + cz;

  const int sx = beta[0] > 0.0 ? 1 : -1;
  const int sy = beta[1] > 0.0 ? 1 : -1;
  const int sz = beta[2] > 0.0 ? 1 : -1;
  const int bx = sx > 0 ? 0 : nx - 1;
  const int by = sy > 0 ? 0 : ny - 1;
  const int bz = sz > 0 ? 0 : nz - 1;

  auto boundary_value = [&](int axis, int i, int j, int k) {
    Vec3 x{(i + 0.5) * hx, (j + 0.5) * hy, (k + 0.5) * hz};
    x[axis] = beta[axis] > 0.0 ? 0.0 : mesh.extent(axis);
    return inflow(t, x, beta);
  };

  for (int kz = 0; kz < nz; ++kz) {
    const int k = bz + sz * kz;
    for (int ky = 0; ky < ny; ++ky) {
      const int j = by + sy * ky;
      for (int kx = 0; kx < nx; ++kx) {
        const int i = bx + sx * kx;
        const std::size_t c = mesh.index(i, j, k);
        double num = source[c];
        if (cx > 0.0)
          num += cx * (kx == 0 ? boundary_value(0, i, j, k) : out[c - sx]);
        if (cy > 0.0)
          num += cy * (ky == 0 ? boundary_value(1, i, j, k)
                               : out[c - static_cast<std::ptrdiff_t>(sy) * nx]);
        if (cz > 0.0)
          num += cz * (kz == 0 ? boundary_value(2, i, j, k)
                               : out[c - static_cast<std::ptrdiff_t>(sz) * nx * ny]);
        out[c] = num / denom;
      }
    }
  }
}

// Solves the discrete-ordinates transport problem for a given emission field.
// Ordinates are independent and may sweep concurrently.
inline RadiationField solve_rte_source(const EmissionField& source,
                                       const InflowData& inflow, double t,
                                       const AngularQuadrature& quad,
                                       const BoxMesh& mesh,
                                       const Parallel& par = Parallel{}) {
  RadiationField I(mesh.cell_count(), quad.size());
  par.run_tasks(quad.size(), [&](std::size_t m) {
    sweep_ordinate(source.values, inflow, t, quad.directions[m], mesh, I.slice(m));
  });
  return I;
}

inline RadiationField solve_rte(const TemperatureField& T, const InflowData& inflow,
                                double t, const AngularQuadrature& quad,
                                const BoxMesh& mesh,
                                const Parallel& par = Parallel{}) {
  return solve_rte_source(emission(T), inflow, t, quad, mesh, par);
}

// Linearity split of the transport solution: `from_emission` solves with the
// inflow zeroed, `from_inflow` with the emission zeroed. Their sum equals the
// full solution to roundoff.
struct RteSplit {
  RadiationField from_emission;  // homogeneous boundary data
  RadiationField from_inflow;    // boundary-driven part
};

inline RteSplit solve_rte_split(const TemperatureField& T, const InflowData& inflow,
                                double t, const AngularQuadrature& quad,
                                const BoxMesh& mesh,
                                const Parallel& par = Parallel{}) {
  RteSplit s;
  s.from_emission = solve_rte_source(emission(T), InflowData::zero(), t, quad, mesh, par);
  EmissionField zero(mesh.cell_count());
  s.from_inflow = solve_rte_source(zero, inflow, t, quad, mesh, par);
  return s;
}

// Incident radiation: the angular integral of the intensity.
inline std::vector<double> incident_radiation(const RadiationField& I,
                                              const AngularQuadrature& quad) {
  if (I.ordinates != quad.size())
    throw std::invalid_argument("incident_radiation: ordinate count mismatch");
  return angular_integrate(I.values, I.cells, quad);
}

// Upwind directional derivative beta.grad_h I for one ordinate, using the
// same stencil as the sweep (inflow ghosts from `inflow`).
inline void directional_derivative(const double* I, const InflowData& inflow,
                                   double t, const Vec3& beta, const BoxMesh& mesh,
                                   double* out) {
  const int nx = mesh.cells_per_axis(0);
  const int ny = mesh.cells_per_axis(1);
  const int nz = mesh.cells_per_axis(2);
  const double hx = mesh.spacing(0);
  const double hy = mesh.spacing(1);
  const double hz = mesh.spacing(2);

  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = mesh.index(i, j, k);
        double d = 0.0;
        for (int a = 0; a < mesh.dim(); ++a) {
          const double ba = beta[a];
          if (ba == 0.0) continue;
          const int idx = a == 0 ? i : (a == 1 ? j : k);
          const int n = a == 0 ? nx : (a == 1 ? ny : nz);
          const double h = a == 0 ? hx : (a == 1 ? hy : hz);
          const int s = ba > 0.0 ? 1 : -1;
          double up;
          if ((s > 0 && idx == 0) || (s < 0 && idx == n - 1)) {
            Vec3 x{(i + 0.5) * hx, (j + 0.5) * hy, (k + 0.5) * hz};
            x[a] = s > 0 ? 0.0 : mesh.extent(a);
            up = inflow(t, x, beta);
          } else {
            const std::ptrdiff_t stride =
                a == 0 ? 1 : (a == 1 ? nx : static_cast<std::ptrdiff_t>(nx) * ny);
            up = I[c - s * stride];
          }
          d += std::abs(ba) * (I[c] - up) / h;
        }
        out[c] = d;
      }
    }
  }
}

}  // namespace radcon
