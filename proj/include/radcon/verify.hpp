#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "radcon/fields.hpp"
#include "radcon/mesh.hpp"
#include "radcon/parallel.hpp"

namespace radcon {

// Wraps a per-cell field as a piecewise-constant function of position.
inline SpaceFunction piecewise_constant(const std::vector<double>& field,
                                        const BoxMesh& mesh) {
  return [&field, &mesh](const Vec3& x) {
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < mesh.dim(); ++a) {
      int i = static_cast<int>(std::floor(x[a] / mesh.spacing(a)));
      i = std::max(0, std::min(mesh.cells_per_axis(a) - 1, i));
      c[a] = i;
    }
    return field[mesh.index(c[0], c[1], c[2])];
  };
}

// Characteristic-integration oracle for one ordinate: traces the ray from
// each cell center back to the inflow boundary and evaluates
//   I(x) = I_b(x0) e^{-s} + \int_0^s e^{-(s-u)} q(x0 + u beta) du
// with composite 4-point Gauss quadrature over `substeps` panels. Shares no
// stencil code with the sweep solver.
inline std::vector<double> ray_trace_transport(const SpaceFunction& source,
                                               const InflowData& inflow, double t,
                                               const Vec3& beta, const BoxMesh& mesh,
                                               int substeps = 200,
                                               const Parallel& par = Parallel{}) {
  if (substeps < 100)
    throw std::invalid_argument("ray_trace_transport: substeps must be >= 100");
  // 4-point Gauss-Legendre on [0,1].
  static const double gp[4] = {0.06943184420297371, 0.33000947820757187,
                               0.66999052179242813, 0.93056815579702629};
  static const double gw[4] = {0.17392742256872693, 0.32607257743127307,
                               0.32607257743127307, 0.17392742256872693};

  const std::size_t cells = mesh.cell_count();
  std::vector<double> out(cells, 0.0);
  par.run_tasks(cells, [&](std::size_t c) {
    const Vec3 xc = mesh.cell_center(c);
    double s = std::numeric_limits<double>::infinity();
    for (int a = 0; a < mesh.dim(); ++a) {
      const double d = beta[a] > 0.0 ? xc[a] / beta[a]
                                     : (xc[a] - mesh.extent(a)) / beta[a];
      s = std::min(s, d);
    }
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::runtime_error("ray_trace_transport: ray exit bookkeeping failed");
    Vec3 x0;
    for (int a = 0; a < 3; ++a) x0[a] = xc[a] - s * beta[a];
    if (!mesh.inside(x0, 1e-9 * (1.0 + s)))
      throw std::runtime_error("ray_trace_transport: ray exit bookkeeping failed");

    double acc = inflow(t, x0, beta) * std::exp(-s);
    const double du = s / substeps;
    for (int p = 0; p < substeps; ++p) {
      const double u0 = p * du;
      for (int g = 0; g < 4; ++g) {
        const double u = u0 + gp[g] * du;
        Vec3 xu;
        for (int a = 0; a < 3; ++a) xu[a] = x0[a] + u * beta[a];
        acc += gw[g] * du * std::exp(-(s - u)) * source(xu);
      }
    }
    out[c] = acc;
  });
  return out;
}

// A manufactured case: closed-form fields plus the derivatives needed to
// build forcings that make them exact solutions of the augmented system.
struct ManufacturedCase {
  SpaceTimeFunction temperature;                 // T*(t,x)
  SpaceTimeFunction temperature_dt;              // dT*/dt
  std::function<Vec3(double, const Vec3&)> temperature_grad;
  SpaceTimeFunction temperature_lap;             // Laplacian of T*
  // Optional analytic intensity (per direction) and its streaming derivative
  // beta.grad I*; null when the case only exercises the heat solve.
  std::function<double(double, const Vec3&, const Vec3&)> intensity;
  std::function<double(double, const Vec3&, const Vec3&)> intensity_streaming;
};

struct MmsForcing {
  // Extra heat source f(t,x) so that T* solves
  //   dT/dt - Lap T + 4 pi theta T^4 = theta G + f.
  SpaceTimeFunction heat_source;
  // Boundary datum g = a dn T* + b T* on the box faces (normal deduced from
  // the face the point lies on).
  SpaceTimeFunction boundary_g;
  // Per-direction transport source q(t,x,beta) = beta.grad I* + I*.
  std::function<double(double, const Vec3&, const Vec3&)> transport_source;
  // Inflow trace of I*.
  InflowData inflow;
};

// Builds the forcings for a manufactured case. `incident` is the incident
// radiation G(t,x) fed to the heat equation (zero for pure-heat studies).
inline MmsForcing mms_forcing(const ManufacturedCase& mc, double theta,
                              const SpaceTimeFunction& incident, double a, double b,
                              const BoxMesh& mesh) {
  MmsForcing f;
  const double pi4 = 4.0 * std::numbers::pi;
  const int dim = mesh.dim();
  std::array<double, 3> extents{mesh.extent(0), mesh.extent(1), mesh.extent(2)};

  f.heat_source = [mc, theta, incident, pi4](double t, const Vec3& x) {
    const double T = mc.temperature(t, x);
    return mc.temperature_dt(t, x) - mc.temperature_lap(t, x) +
           pi4 * theta * T * T * T * T - theta * incident(t, x);
  };
  f.boundary_g = [mc, a, b, dim, extents](double t, const Vec3& x) {
    Vec3 n{0.0, 0.0, 0.0};
    double best = std::numeric_limits<double>::infinity();
    for (int ax = 0; ax < dim; ++ax) {
      if (std::abs(x[ax]) < best) {
        best = std::abs(x[ax]);
        n = Vec3{0.0, 0.0, 0.0};
        n[ax] = -1.0;
      }
      if (std::abs(x[ax] - extents[ax]) < best) {
        best = std::abs(x[ax] - extents[ax]);
        n = Vec3{0.0, 0.0, 0.0};
        n[ax] = 1.0;
      }
    }
    return a * dot(mc.temperature_grad(t, x), n) + b * mc.temperature(t, x);
  };
  if (mc.intensity) {
    f.transport_source = [mc](double t, const Vec3& x, const Vec3& beta) {
      return mc.intensity_streaming(t, x, beta) + mc.intensity(t, x, beta);
    };
    f.inflow = InflowData{[mc](double t, const Vec3& x, const Vec3& beta) {
      return mc.intensity(t, x, beta);
    }};
  } else {
    f.inflow = InflowData::zero();
  }
  return f;
}

// Central finite-difference check of the analytic derivatives at `points`
// random locations; returns the largest relative mismatch.
inline double validate_case(const ManufacturedCase& mc, const BoxMesh& mesh,
                            double horizon, std::uint64_t seed, int points = 10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  double worst = 0.0;
  const double rel1 = 1e-5;  // first derivatives
  const double rel2 = 1e-4;  // second differences need a wider step
  for (int p = 0; p < points; ++p) {
    Vec3 x{0.5, 0.5, 0.5};
    for (int a = 0; a < mesh.dim(); ++a) x[a] = unit(rng) * mesh.extent(a);
    const double t = unit(rng) * horizon;

    const double st = rel1 * (1.0 + std::abs(t));
    const double fd_dt =
        (mc.temperature(t + st, x) - mc.temperature(t - st, x)) / (2.0 * st);
    const double ref_dt = mc.temperature_dt(t, x);
    worst = std::max(worst, std::abs(fd_dt - ref_dt) / (1.0 + std::abs(ref_dt)));

    const Vec3 grad = mc.temperature_grad(t, x);
    for (int a = 0; a < mesh.dim(); ++a) {
      const double h = rel1 * (1.0 + std::abs(x[a]));
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double fd = (mc.temperature(t, xp) - mc.temperature(t, xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - grad[a]) / (1.0 + std::abs(grad[a])));
    }

    double fd_lap = 0.0;
    for (int a = 0; a < mesh.dim(); ++a) {
      const double h = rel2 * (1.0 + std::abs(x[a]));
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      fd_lap += (mc.temperature(t, xp) - 2.0 * mc.temperature(t, x) +
                 mc.temperature(t, xm)) /
                (h * h);
    }
    const double ref_lap = mc.temperature_lap(t, x);
    worst = std::max(worst, std::abs(fd_lap - ref_lap) / (1.0 + std::abs(ref_lap)));
  }
  return worst;
}

struct ConvergenceStudy {
  std::vector<double> resolutions;  // h (or dt)
  std::vector<double> errors;
  bool monotone = true;
  double observed_order = 0.0;
};

// Least-squares slope of log(error) against log(h). Flags non-monotone
// error sequences instead of failing.
inline ConvergenceStudy estimate_order(const std::vector<double>& resolutions,
                                       const std::vector<double>& errors) {
  if (resolutions.size() < 3 || resolutions.size() != errors.size())
    throw std::invalid_argument("estimate_order: need >= 3 matching resolutions");
  ConvergenceStudy s;
  s.resolutions = resolutions;
  s.errors = errors;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(std::isfinite(errors[i]) && errors[i] > 0.0))
      throw std::invalid_argument("estimate_order: errors must be positive");
    if (errors[i + 1] > errors[i]) s.monotone = false;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double lx = std::log(resolutions[i]);
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  s.observed_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return s;
}

}  // namespace radcon
