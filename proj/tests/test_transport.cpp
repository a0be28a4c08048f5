#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radcon/transport.hpp"
#include "radcon/verify.hpp"

using namespace radcon;

TEST_CASE("emission is the pointwise fourth power and rejects negatives") {
  TemperatureField T(3);
  T.values = {0.0, 2.0, 0.5};
  auto e = emission(T);
  CHECK(e.values[0] == 0.0);
  CHECK(e.values[1] == 16.0);
  CHECK(e.values[2] == doctest::Approx(0.0625));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  TemperatureField R(50);
  for (auto& v : R.values) v = u(rng);
  auto er = emission(R);
  for (std::size_t c = 0; c < R.size(); ++c)
    CHECK(er.values[c] == doctest::Approx(std::pow(R.values[c], 4.0)).epsilon(1e-14));

  T.values[1] = -0.1;
  CHECK_THROWS_AS(emission(T), std::invalid_argument);
}

TEST_CASE("constant emission with matching inflow reproduces the constant") {
  for (int dim : {1, 2, 3}) {
    BoxMesh mesh(dim, {1.0, 1.0, 1.0}, {6, 5, 4});
    const auto quad = build_quadrature(dim, dim == 1 ? 2 : (dim == 2 ? 4 : 2));
    const double c = 0.8;
    EmissionField q(mesh.cell_count(), c);
    auto I = solve_rte_source(q, InflowData::constant(c), 0.0, quad, mesh);
    for (double v : I.values) CHECK(v == doctest::Approx(c).epsilon(1e-14));
  }
}

TEST_CASE("1-D attenuation matches the exact discrete and continuous solutions") {
  // q = 0, I_b = 1, beta = +1: the upwind solution is (1+h)^-(i+1), which
  // converges to e^-x at first order.
  double prev_err = 1e300;
  for (int n : {32, 64, 128}) {
    BoxMesh mesh(1, {1.0, 0, 0}, {n, 0, 0});
    const auto quad = build_quadrature(1, 2);
    EmissionField q(mesh.cell_count(), 0.0);
    auto I = solve_rte_source(q, InflowData::constant(1.0), 0.0, quad, mesh);
    const double h = mesh.spacing(0);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double exact_discrete = std::pow(1.0 + h, -(i + 1));
      CHECK(I.at(0, i) == doctest::Approx(exact_discrete).epsilon(1e-13));
      err = std::max(err, std::abs(I.at(0, i) - std::exp(-(i + 0.5) * h)));
    }
    CHECK(err < 0.75 * prev_err);  // at least first-order decay
    prev_err = err;
  }
}

TEST_CASE("1-D emission-driven solution approaches 1 - e^-x") {
  BoxMesh mesh(1, {1.0, 0, 0}, {256, 0, 0});
  const auto quad = build_quadrature(1, 2);
  EmissionField q(mesh.cell_count(), 1.0);
  auto I = solve_rte_source(q, InflowData::zero(), 0.0, quad, mesh);
  double err = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double x = (i + 0.5) * mesh.spacing(0);
    err = std::max(err, std::abs(I.at(0, i) - (1.0 - std::exp(-x))));
  }
  CHECK(err < 2.5 * mesh.spacing(0));
}

TEST_CASE("discrete maximum principle: non-negative data gives non-negative intensity") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 3;
    BoxMesh mesh(dim, {1.0 + u(rng), 1.0, 1.0}, {4 + trial % 5, 5, 3});
    const auto quad = build_quadrature(dim, dim == 1 ? 2 : (dim == 2 ? 4 : 2));
    TemperatureField T(mesh.cell_count());
    for (auto& v : T.values) v = u(rng);
    const double amp = u(rng);
    InflowData inflow{[amp](double, const Vec3& x, const Vec3&) {
      return amp * (1.0 + std::sin(3.0 * x[0]) * std::sin(3.0 * x[0]));
    }};
    auto I = solve_rte(T, inflow, 0.0, quad, mesh);
    CHECK(min_value(I.values) >= 0.0);
    CHECK(all_finite(I.values));
  }
}

TEST_CASE("linearity: full solve equals emission part plus inflow part") {
  BoxMesh mesh(2, {1.0, 1.5, 0}, {8, 6, 0});
  const auto quad = build_quadrature(2, 8);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TemperatureField T(mesh.cell_count());
  for (auto& v : T.values) v = u(rng);
  InflowData inflow{[](double, const Vec3& x, const Vec3&) { return 0.3 + 0.1 * x[1]; }};

  auto full = solve_rte(T, inflow, 0.0, quad, mesh);
  auto split = solve_rte_split(T, inflow, 0.0, quad, mesh);
  for (std::size_t i = 0; i < full.values.size(); ++i)
    CHECK(full.values[i] == doctest::Approx(split.from_emission.values[i] +
                                            split.from_inflow.values[i])
                                .epsilon(1e-12));
}

TEST_CASE("incident radiation of a constant field is measure times the constant") {
  BoxMesh mesh(3, {1, 1, 1}, {3, 3, 3});
  const auto quad = build_quadrature(3, 2);
  RadiationField I(mesh.cell_count(), quad.size());
  for (auto& v : I.values) v = 2.0;
  auto G = incident_radiation(I, quad);
  for (double v : G)
    CHECK(v == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-13));

  RadiationField zero(mesh.cell_count(), quad.size());
  auto Gz = incident_radiation(zero, quad);
  for (double v : Gz) CHECK(v == 0.0);

  // Anisotropic field concentrated on one ordinate.
  RadiationField one(mesh.cell_count(), quad.size());
  one.at(5, 7) = 3.0;
  auto Go = incident_radiation(one, quad);
  CHECK(Go[7] == doctest::Approx(3.0 * quad.weights[5]));
  CHECK(Go[6] == 0.0);
}

TEST_CASE("sweep agrees with the characteristic ray-trace oracle") {
  // Smooth emission on a coarse cube; the two solvers share no stencil code.
  BoxMesh mesh(3, {1, 1, 1}, {8, 8, 8});
  const auto quad = build_quadrature(3, 2);
  TemperatureField T(mesh.cell_count());
  for (std::size_t c = 0; c < T.size(); ++c) {
    const Vec3 x = mesh.cell_center(c);
    T.values[c] = 0.4 + 0.3 * std::cos(std::numbers::pi * x[0]) *
                            std::cos(std::numbers::pi * x[1]) *
                            std::cos(std::numbers::pi * x[2]);
  }
  InflowData inflow{[](double, const Vec3& x, const Vec3&) { return 0.1 + 0.05 * x[2]; }};
  auto I = solve_rte(T, inflow, 0.0, quad, mesh);

  const EmissionField q = emission(T);
  const auto qfun = piecewise_constant(q.values, mesh);
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < quad.size(); ++m) {
    auto oracle = ray_trace_transport(qfun, inflow, 0.0, quad.directions[m], mesh, 200);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
      const double d = I.at(m, c) - oracle[c];
      num += d * d;
      den += oracle[c] * oracle[c];
    }
  }
  const double rel = std::sqrt(num / den);
  CHECK(rel < 0.25);  // first-order band at h = 1/8
  CHECK(rel > 1e-6);  // the solvers are genuinely different paths
}
