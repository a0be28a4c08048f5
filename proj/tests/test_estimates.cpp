#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radcon/estimates.hpp"

using namespace radcon;

namespace {

ScenarioConfig decay_scenario(int dim, BoundaryFamily family, double amplitude,
                              double theta) {
  const std::array<int, 3> cells =
      dim == 1 ? std::array<int, 3>{64, 0, 0}
               : (dim == 2 ? std::array<int, 3>{12, 12, 0}
                           : std::array<int, 3>{6, 6, 6});
  ScenarioConfig cfg{BoxMesh(dim, {1.0, 1.0, 1.0}, cells), TimeGrid(0.1, 10)};
  cfg.quadrature = build_quadrature(dim, dim == 2 ? 4 : 2);
  switch (family) {
    case BoundaryFamily::dirichlet:
      cfg.bc = BoundarySpec::dirichlet([](double, const Vec3&) { return 0.0; });
      break;
    case BoundaryFamily::neumann:
      cfg.bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
      break;
    case BoundaryFamily::robin:
      cfg.bc = BoundarySpec::robin(1.0, 1.0, [](double, const Vec3&) { return 0.0; });
      break;
  }
  cfg.theta = theta;
  cfg.inflow = InflowData::constant(0.1 * amplitude);
  cfg.initial = TemperatureField(cfg.mesh.cell_count());
  for (std::size_t c = 0; c < cfg.initial.size(); ++c) {
    const Vec3 x = cfg.mesh.cell_center(c);
    double v = amplitude;
    for (int a = 0; a < dim; ++a) v *= std::sin(std::numbers::pi * x[a]);
    cfg.initial.values[c] = v;
  }
  if (family == BoundaryFamily::dirichlet) cfg.inflow = InflowData::zero();
  return cfg;
}

}  // namespace

TEST_CASE("zero data: every asserted estimate row holds trivially") {
  auto cfg = decay_scenario(1, BoundaryFamily::robin, 0.0, 1.0);
  cfg.inflow = InflowData::zero();
  auto sol = picard_solve(cfg);
  REQUIRE(sol.converged);
  auto report = check_all_estimates(sol, cfg);
  CHECK(report.all_asserted_pass());
  const auto* row = report.find("Thm3.1-(12)");
  REQUIRE(row != nullptr);
  CHECK(row->lhs == 0.0);
}

TEST_CASE("constant equilibrium: transport L2 rows are tight (slack 1)") {
  ScenarioConfig cfg{BoxMesh(3, {1, 1, 1}, {5, 5, 5}), TimeGrid(0.1, 4)};
  cfg.quadrature = build_quadrature(3, 2);
  cfg.bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
  cfg.inflow = InflowData::constant(1.0);
  cfg.theta = 1.0;
  cfg.initial = TemperatureField(cfg.mesh.cell_count(), 1.0);
  auto sol = picard_solve(cfg);
  REQUIRE(sol.converged);

  auto split = transport_split_stage(sol.temperature, cfg);
  auto report = check_transport_estimates(split, sol.temperature, cfg);
  const auto* r12 = report.find("Thm3.1-(12)");
  REQUIRE(r12 != nullptr);
  CHECK(r12->kind == RowKind::asserted);
  CHECK(r12->satisfied);
  // The homogeneous part carries a boundary layer on this unit box, so the
  // ratio sits well inside the bound but is far from degenerate.
  CHECK(r12->slack <= 1.0 + 1e-12);
  CHECK(r12->slack > 0.2);

  // The full intensity is the constant c^4; the emission term of the
  // combined bound is attained and the boundary term roughly doubles the
  // right-hand side.
  const auto* r10 = report.find("Thm3.1-(10)-L2");
  REQUIRE(r10 != nullptr);
  CHECK(r10->satisfied);
  CHECK(r10->slack > 0.4);
  CHECK(r10->slack <= 1.0 + 1e-12);
}

TEST_CASE("transport estimate rows hold for random admissible scenarios") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = 1 + trial % 3;
    auto cfg = decay_scenario(dim,
                              trial % 2 ? BoundaryFamily::robin
                                        : BoundaryFamily::neumann,
                              0.2 + 0.3 * u(rng), 0.5 + u(rng));
    auto sol = picard_solve(cfg);
    REQUIRE(sol.converged);
    auto split = transport_split_stage(sol.temperature, cfg);
    auto report = check_transport_estimates(split, sol.temperature, cfg);
    CHECK(report.all_asserted_pass());
    for (const char* tag : {"Thm3.1-(12)", "Thm3.1-(12)-int", "Thm3.1-(14)",
                            "Thm3.1-(14)-int"}) {
      const auto* row = report.find(tag);
      REQUIRE(row != nullptr);
      CHECK(row->kind == RowKind::asserted);
      CHECK(row->satisfied);
      // These bounds hold for the scheme itself, not just asymptotically.
      CHECK(row->slack <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("L8 bounds: Robin and Dirichlet asserted with g = 0") {
  for (auto family : {BoundaryFamily::robin, BoundaryFamily::dirichlet}) {
    auto cfg = decay_scenario(1, family, 0.5, 1.0);
    auto sol = picard_solve(cfg);
    REQUIRE(sol.converged);
    auto report = check_L8_bounds(sol, cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].kind == RowKind::asserted);
    CHECK(report.rows[0].satisfied);
  }
}

TEST_CASE("L8 bounds: Neumann row is reported, theta = 0 inapplicable") {
  auto cfg = decay_scenario(1, BoundaryFamily::neumann, 0.5, 1.0);
  auto sol = picard_solve(cfg);
  REQUIRE(sol.converged);
  auto report = check_L8_bounds(sol, cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].kind == RowKind::reported);
  CHECK(report.rows[0].note.find("C(theta)") != std::string::npos);

  auto cfg0 = decay_scenario(1, BoundaryFamily::neumann, 0.5, 0.0);
  auto sol0 = picard_solve(cfg0);
  REQUIRE(sol0.converged);
  auto report0 = check_L8_bounds(sol0, cfg0);
  CHECK(report0.rows[0].kind == RowKind::inapplicable);
}

TEST_CASE("L8 Dirichlet margin tightens as theta grows") {
  // The initial-datum term of the bound scales like 1/theta, so the headroom
  // rhs/lhs shrinks with growing theta while the bound keeps holding.
  double prev_slack = 0.0;
  for (double theta : {0.1, 1.0, 10.0}) {
    auto cfg = decay_scenario(1, BoundaryFamily::dirichlet, 0.5, theta);
    auto sol = picard_solve(cfg);
    REQUIRE(sol.converged);
    auto report = check_L8_bounds(sol, cfg);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].satisfied);
    CHECK(report.rows[0].slack > prev_slack);
    CHECK(report.rows[0].slack <= 1.0);
    prev_slack = report.rows[0].slack;
  }
}

TEST_CASE("G estimate: degenerate and generic cases") {
  auto zero = decay_scenario(1, BoundaryFamily::robin, 0.0, 1.0);
  zero.inflow = InflowData::zero();
  auto sol0 = picard_solve(zero);
  auto r0 = check_G_estimate(sol0, zero);
  CHECK(r0.find("Prop3.2-(15)")->kind == RowKind::inapplicable);

  auto cfg = decay_scenario(2, BoundaryFamily::robin, 0.4, 1.0);
  auto sol = picard_solve(cfg);
  REQUIRE(sol.converged);
  auto r = check_G_estimate(sol, cfg);
  const auto* row = r.find("Prop3.2-(15)");
  REQUIRE(row != nullptr);
  CHECK(row->kind == RowKind::reported);
  CHECK(row->slack > 0.0);
  CHECK(std::isfinite(row->slack));
}

TEST_CASE("norm ledgers are bit-identical across recomputation") {
  auto cfg = decay_scenario(2, BoundaryFamily::robin, 0.3, 1.0);
  auto sol = picard_solve(cfg);
  REQUIRE(sol.converged);
  const NormLedger a = compute_norms(sol, cfg);
  const NormLedger b = compute_norms(sol, cfg);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].first == b.entries[i].first);
    CHECK(a.entries[i].second == b.entries[i].second);  // exact bit equality
  }
}

TEST_CASE("empirical C2 ratio is stable under refinement") {
  std::vector<double> ratios;
  for (int n : {32, 64, 128}) {
    ScenarioConfig cfg{BoxMesh(1, {1.0, 0, 0}, {n, 0, 0}), TimeGrid(0.1, 10)};
    cfg.quadrature = build_quadrature(1, 2);
    cfg.bc = BoundarySpec::neumann([](double, const Vec3&) { return 0.0; });
    cfg.inflow = InflowData::constant(1.0);
    cfg.theta = 1.0;
    cfg.initial = TemperatureField(cfg.mesh.cell_count(), 1.0);
    auto sol = picard_solve(cfg);
    REQUIRE(sol.converged);
    auto r = check_G_estimate(sol, cfg);
    ratios.push_back(r.find("Prop3.2-(15)")->slack);
  }
  CHECK(std::abs(ratios[2] - ratios[1]) <= 0.05 * ratios[1]);
}
