#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radcon/heat.hpp"

using namespace radcon;

namespace {

IncidentHistory constant_incident(std::size_t cells, int levels, double value) {
  return IncidentHistory(levels, std::vector<double>(cells, value));
}

}  // namespace

TEST_CASE("boundary families and validation") {
  CHECK(BoundarySpec::dirichlet(nullptr).family() == BoundaryFamily::dirichlet);
  CHECK(BoundarySpec::neumann(nullptr).family() == BoundaryFamily::neumann);
  CHECK(BoundarySpec::robin(1.0, 2.0, nullptr).family() == BoundaryFamily::robin);
  CHECK_THROWS_AS((BoundarySpec{0.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BoundarySpec{-1.0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("radiative equilibrium is an exact steady state over 100 steps") {
  BoxMesh mesh(3, {1, 1, 1}, {6, 6, 6});
  const double c = 1.0, theta = 0.7, dt = 0.01;
  const double g_eq = 4.0 * std::numbers::pi * c * c * c * c;
  auto bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
  TemperatureField T(mesh.cell_count(), c);
  const std::vector<double> G(mesh.cell_count(), g_eq);
  for (int n = 0; n < 100; ++n)
    T = heat_step(T, G, bc, theta, (n + 1) * dt, dt, mesh);
  for (double v : T.values) CHECK(std::abs(v - c) < 1e-10);
}

TEST_CASE("pure conduction: Fourier mode matches the exact discrete decay") {
  // theta = 0, zero-flux boundary: cos(pi x / L) sampled at cell centers is
  // an exact eigenvector of the discrete operator, so the implicit solution
  // is known in closed form.
  BoxMesh mesh(1, {1.0, 0, 0}, {64, 0, 0});
  const double L = 1.0, eps = 0.1, base = 1.0, dt = 0.01;
  const int steps = 20;
  auto bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
  TemperatureField T(mesh.cell_count());
  for (std::size_t c = 0; c < T.size(); ++c)
    T.values[c] = base + eps * std::cos(std::numbers::pi * mesh.cell_center(c)[0] / L);

  const double h = mesh.spacing(0);
  const double lambda_h =
      (2.0 - 2.0 * std::cos(std::numbers::pi * h / L)) / (h * h);
  const double rho = 1.0 / (1.0 + dt * lambda_h);
  const std::vector<double> G(mesh.cell_count(), 0.0);
  for (int n = 1; n <= steps; ++n) {
    T = heat_step(T, G, bc, 0.0, n * dt, dt, mesh);
    for (std::size_t c = 0; c < T.size(); ++c) {
      const double expect =
          base + eps * std::pow(rho, n) *
                     std::cos(std::numbers::pi * mesh.cell_center(c)[0] / L);
      CHECK(T.values[c] == doctest::Approx(expect).epsilon(1e-8));
    }
  }
  // And the analytic mode decay within O(dt) + O(h^2).
  const double lambda = std::pow(std::numbers::pi / L, 2.0);
  const double t_final = steps * dt;
  CHECK(std::abs(std::pow(rho, steps) - std::exp(-lambda * t_final)) <
        2.0 * (dt + h * h) * lambda * t_final);
}

TEST_CASE("conservation under zero-flux boundaries and zero coupling") {
  BoxMesh mesh(2, {1.0, 1.0, 0}, {12, 10, 0});
  auto bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  TemperatureField T(mesh.cell_count());
  for (auto& v : T.values) v = u(rng);
  double mass0 = 0.0;
  for (double v : T.values) mass0 += v * mesh.cell_volume();
  const std::vector<double> G(mesh.cell_count(), 0.0);
  for (int n = 1; n <= 10; ++n) {
    T = heat_step(T, G, bc, 0.0, n * 0.01, 0.01, mesh);
    double mass = 0.0;
    for (double v : T.values) mass += v * mesh.cell_volume();
    CHECK(mass == doctest::Approx(mass0).epsilon(1e-9));
  }
}

TEST_CASE("Dirichlet decay: positivity and monotone L5 norm") {
  BoxMesh mesh(1, {1.0, 0, 0}, {48, 0, 0});
  auto bc = BoundarySpec::dirichlet([](double, const Vec3&) { return 0.0; });
  TemperatureField T(mesh.cell_count());
  for (std::size_t c = 0; c < T.size(); ++c) {
    const double x = mesh.cell_center(c)[0];
    T.values[c] = std::sin(std::numbers::pi * x);
  }
  const std::vector<double> G(mesh.cell_count(), 0.0);
  double prev = 1e300;
  for (int n = 1; n <= 15; ++n) {
    T = heat_step(T, G, bc, 1.0, n * 0.005, 0.005, mesh);
    CHECK(min_value(T.values) >= 0.0);
    double l5 = 0.0;
    for (double v : T.values) l5 += std::pow(v, 5.0) * mesh.cell_volume();
    CHECK(l5 <= prev * (1.0 + 1e-12));
    prev = l5;
  }
}

TEST_CASE("nonlinear solution is dominated by the linear comparison problem") {
  BoxMesh mesh(2, {1.0, 1.0, 0}, {10, 10, 0});
  const double theta = 2.0, dt = 0.01;
  auto bc = BoundarySpec::robin(1.0, 1.0, [](double, const Vec3&) { return 0.3; });
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TemperatureField T(mesh.cell_count()), Z(mesh.cell_count());
  for (std::size_t c = 0; c < T.size(); ++c) T.values[c] = Z.values[c] = u(rng);
  std::vector<double> G(mesh.cell_count());
  for (auto& v : G) v = 3.0 * u(rng);
  std::vector<double> theta_G(G);
  for (auto& v : theta_G) v *= theta;
  const std::vector<double> zeroG(mesh.cell_count(), 0.0);
  for (int n = 1; n <= 10; ++n) {
    T = heat_step(T, G, bc, theta, n * dt, dt, mesh);
    Z = heat_step(Z, zeroG, bc, 0.0, n * dt, dt, mesh, {}, &theta_G);
    for (std::size_t c = 0; c < T.size(); ++c)
      CHECK(T.values[c] <= Z.values[c] + 1e-9);
  }
}

TEST_CASE("Robin solutions approach the Dirichlet solution as b/a grows") {
  BoxMesh mesh(1, {1.0, 0, 0}, {32, 0, 0});
  const double g0 = 0.5;
  TimeGrid tg(0.1, 10);
  TemperatureField T0(mesh.cell_count(), 0.0);
  auto dirichlet = BoundarySpec::dirichlet([g0](double, const Vec3&) { return g0; });
  const auto G = constant_incident(mesh.cell_count(), tg.levels(), 0.0);
  auto ref = solve_heat(T0, G, dirichlet, 0.5, tg, mesh);

  double prev_err = 1e300;
  for (double kappa : {10.0, 100.0, 1000.0}) {
    auto robin = BoundarySpec::robin(
        1.0, kappa, [g0, kappa](double, const Vec3&) { return kappa * g0; });
    auto sol = solve_heat(T0, G, robin, 0.5, tg, mesh);
    double err = 0.0;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c)
      err = std::max(err, std::abs(sol.back().values[c] - ref.back().values[c]));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-3);
}

TEST_CASE("solve_heat: zero data stays zero; level counts are validated") {
  BoxMesh mesh(1, {1.0, 0, 0}, {8, 0, 0});
  TimeGrid tg(0.1, 5);
  auto bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
  TemperatureField T0(mesh.cell_count(), 0.0);
  auto hist = solve_heat(T0, constant_incident(mesh.cell_count(), tg.levels(), 0.0),
                         bc, 1.0, tg, mesh);
  REQUIRE(hist.size() == 6);
  for (const auto& lvl : hist)
    for (double v : lvl.values) CHECK(v == 0.0);

  CHECK_THROWS_AS(
      solve_heat(T0, constant_incident(mesh.cell_count(), 3, 0.0), bc, 1.0, tg, mesh),
      std::invalid_argument);
}

TEST_CASE("heat_step rejects invalid input") {
  BoxMesh mesh(1, {1.0, 0, 0}, {8, 0, 0});
  auto bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
  TemperatureField T(mesh.cell_count(), 1.0);
  std::vector<double> G(mesh.cell_count(), 0.0);
  TemperatureField bad = T;
  bad.values[2] = -0.5;
  CHECK_THROWS_AS(heat_step(bad, G, bc, 1.0, 0.1, 0.1, mesh), std::invalid_argument);
  std::vector<double> badG(mesh.cell_count(), -1.0);
  CHECK_THROWS_AS(heat_step(T, badG, bc, 1.0, 0.1, 0.1, mesh), std::invalid_argument);
  CHECK_THROWS_AS(heat_step(T, G, bc, 1.0, 0.1, 0.0, mesh), std::invalid_argument);
}

TEST_CASE("strong coupling steps stay positive with random data") {
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 3;
    BoxMesh mesh(dim, {1.0, 1.0, 1.0}, {6, 5, 4});
    const double theta = 0.2 + 2.0 * u(rng);
    auto bc = trial % 3 == 0
                  ? BoundarySpec::dirichlet([](double, const Vec3&) { return 0.0; })
                  : (trial % 3 == 1
                         ? BoundarySpec::neumann(
                               [](double, const Vec3&) { return 0.0; })
                         : BoundarySpec::robin(
                               1.0, 1.0, [](double, const Vec3&) { return 0.2; }));
    TemperatureField T(mesh.cell_count());
    for (auto& v : T.values) v = u(rng);
    if (bc.family() == BoundaryFamily::dirichlet)
      for (const auto& f : mesh.boundary_faces()) T.values[f.cell] = 0.0;
    std::vector<double> G(mesh.cell_count());
    for (auto& v : G) v = 5.0 * u(rng);
    for (int n = 1; n <= 5; ++n) {
      T = heat_step(T, G, bc, theta, n * 0.02, 0.02, mesh);
      CHECK(min_value(T.values) >= 0.0);
    }
  }
}
