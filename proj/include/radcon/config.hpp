#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "radcon/expression.hpp"
#include "radcon/fixedpoint.hpp"

namespace radcon {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputSettings {
  std::string directory = "radcon_out";
  bool fields = true;
  int cadence = 1;  // write every cadence-th time level (plus the final one)
  bool vtk = false;
};

struct CheckSettings {
  bool transport = true;
  bool l8 = true;
  bool g_estimate = true;
  double tol = 0.05;
};

struct RunConfig {
  int dim = 1;
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  std::array<int, 3> cells{32, 1, 1};
  double horizon = 0.1;
  int steps = 10;
  int quadrature_order = 2;
  double bc_a = 1.0;
  double bc_b = 0.0;
  Expression g{"0"};
  Expression ib{"0"};
  Expression T0{"0"};
  double theta = 1.0;
  PicardOptions picard{};
  HeatOptions heat{};
  OutputSettings output{};
  CheckSettings checks{};
  std::uint64_t seed = 12345;
};

namespace config_detail {

inline void require_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("config: unknown key \"" + key + "\" in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for \"" + key + "\": " + e.what());
  }
}

inline Expression get_expr(const json& obj, const std::string& key,
                           const std::string& fallback) {
  const std::string text = get_or<std::string>(obj, key, fallback);
  try {
    return Expression(text);
  } catch (const ExpressionError& e) {
    throw ConfigError("config: \"" + key + "\": " + e.what());
  }
}

}  // namespace config_detail

inline RunConfig parse_run_config(const json& j) {
  using config_detail::get_expr;
  using config_detail::get_or;
  using config_detail::require_keys;

  require_keys(j, "document",
               {"mesh", "time", "quadrature", "boundary", "inflow", "theta",
                "initial", "picard", "heat", "output", "checks", "seed"});
  RunConfig rc;

  const json mesh = j.value("mesh", json::object());
  require_keys(mesh, "mesh", {"dim", "extents", "cells"});
  rc.dim = get_or(mesh, "dim", 1);
  if (rc.dim < 1 || rc.dim > 3) throw ConfigError("config: mesh.dim must be 1, 2 or 3");
  const auto extents = get_or(mesh, "extents", std::vector<double>{1.0});
  const auto cells = get_or(mesh, "cells", std::vector<int>{32});
  if (static_cast<int>(extents.size()) != rc.dim ||
      static_cast<int>(cells.size()) != rc.dim)
    throw ConfigError("config: mesh.extents/cells must have dim entries");
  for (int a = 0; a < rc.dim; ++a) {
    rc.extents[a] = extents[a];
    rc.cells[a] = cells[a];
  }

  const json time = j.value("time", json::object());
  require_keys(time, "time", {"horizon", "steps"});
  rc.horizon = get_or(time, "horizon", 0.1);
  rc.steps = get_or(time, "steps", 10);

  const json quad = j.value("quadrature", json::object());
  require_keys(quad, "quadrature", {"order"});
  rc.quadrature_order = get_or(quad, "order", rc.dim == 2 ? 4 : 2);

  const json boundary = j.value("boundary", json::object());
  require_keys(boundary, "boundary", {"a", "b", "g"});
  rc.bc_a = get_or(boundary, "a", 1.0);
  rc.bc_b = get_or(boundary, "b", 0.0);
  rc.g = get_expr(boundary, "g", "0");

  const json inflow = j.value("inflow", json::object());
  require_keys(inflow, "inflow", {"ib"});
  rc.ib = get_expr(inflow, "ib", "0");

  rc.theta = get_or(j, "theta", 1.0);

  const json initial = j.value("initial", json::object());
  require_keys(initial, "initial", {"T0"});
  rc.T0 = get_expr(initial, "T0", "0");

  const json picard = j.value("picard", json::object());
  require_keys(picard, "picard", {"tol", "max_iter", "mode"});
  rc.picard.tol = get_or(picard, "tol", 1e-8);
  rc.picard.max_iter = get_or(picard, "max_iter", 200);
  const std::string mode = get_or<std::string>(picard, "mode", "stepwise");
  if (mode == "global")
    rc.picard.mode = PicardOptions::Mode::global;
  else if (mode == "stepwise")
    rc.picard.mode = PicardOptions::Mode::stepwise;
  else
    throw ConfigError("config: picard.mode must be \"global\" or \"stepwise\"");

  const json heat = j.value("heat", json::object());
  require_keys(heat, "heat",
               {"newton_tol", "newton_max_iter", "positivity_tol", "cg_tol"});
  rc.heat.newton_tol = get_or(heat, "newton_tol", 1e-10);
  rc.heat.newton_max_iter = get_or(heat, "newton_max_iter", 50);
  rc.heat.positivity_tol = get_or(heat, "positivity_tol", 1e-12);
  rc.heat.cg_tol = get_or(heat, "cg_tol", 1e-10);

  const json output = j.value("output", json::object());
  require_keys(output, "output", {"directory", "fields", "cadence", "vtk"});
  rc.output.directory = get_or<std::string>(output, "directory", "radcon_out");
  rc.output.fields = get_or(output, "fields", true);
  rc.output.cadence = get_or(output, "cadence", 1);
  rc.output.vtk = get_or(output, "vtk", false);
  if (rc.output.cadence < 1) throw ConfigError("config: output.cadence must be >= 1");

  const json checks = j.value("checks", json::object());
  require_keys(checks, "checks", {"transport", "l8", "g_estimate", "tol"});
  rc.checks.transport = get_or(checks, "transport", true);
  rc.checks.l8 = get_or(checks, "l8", true);
  rc.checks.g_estimate = get_or(checks, "g_estimate", true);
  rc.checks.tol = get_or(checks, "tol", 0.05);

  rc.seed = get_or<std::uint64_t>(j, "seed", 12345);
  return rc;
}

// Normalized form: every key present, defaults materialized, fixed order.
inline ordered_json normalize(const RunConfig& rc) {
  ordered_json j;
  j["mesh"]["dim"] = rc.dim;
  j["mesh"]["extents"] = std::vector<double>(rc.extents.begin(),
                                             rc.extents.begin() + rc.dim);
  j["mesh"]["cells"] =
      std::vector<int>(rc.cells.begin(), rc.cells.begin() + rc.dim);
  j["time"]["horizon"] = rc.horizon;
  j["time"]["steps"] = rc.steps;
  j["quadrature"]["order"] = rc.quadrature_order;
  j["boundary"]["a"] = rc.bc_a;
  j["boundary"]["b"] = rc.bc_b;
  j["boundary"]["g"] = rc.g.text();
  j["inflow"]["ib"] = rc.ib.text();
  j["theta"] = rc.theta;
  j["initial"]["T0"] = rc.T0.text();
  j["picard"]["tol"] = rc.picard.tol;
  j["picard"]["max_iter"] = rc.picard.max_iter;
  j["picard"]["mode"] = to_string(rc.picard.mode);
  j["heat"]["newton_tol"] = rc.heat.newton_tol;
  j["heat"]["newton_max_iter"] = rc.heat.newton_max_iter;
  j["heat"]["positivity_tol"] = rc.heat.positivity_tol;
  j["heat"]["cg_tol"] = rc.heat.cg_tol;
  j["output"]["directory"] = rc.output.directory;
  j["output"]["fields"] = rc.output.fields;
  j["output"]["cadence"] = rc.output.cadence;
  j["output"]["vtk"] = rc.output.vtk;
  j["checks"]["transport"] = rc.checks.transport;
  j["checks"]["l8"] = rc.checks.l8;
  j["checks"]["g_estimate"] = rc.checks.g_estimate;
  j["checks"]["tol"] = rc.checks.tol;
  j["seed"] = rc.seed;
  return j;
}

// Builds the scenario and validates the data assumptions: non-negative
// initial datum, boundary datum and inflow (sampled everywhere they are
// evaluated), and the Dirichlet compatibility T0 = g(0)/b on the boundary.
inline ScenarioConfig build_scenario(const RunConfig& rc) {
  ScenarioConfig cfg{BoxMesh(rc.dim, rc.extents, rc.cells),
                     TimeGrid(rc.horizon, rc.steps)};
  try {
    cfg.quadrature = build_quadrature(rc.dim, rc.quadrature_order);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const Expression g = rc.g;
  const Expression ib = rc.ib;
  cfg.bc = BoundarySpec{rc.bc_a, rc.bc_b,
                        [g](double t, const Vec3& x) { return g(t, x); }};
  try {
    cfg.bc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.inflow.value = [ib](double t, const Vec3& x, const Vec3&) { return ib(t, x); };
  cfg.theta = rc.theta;
  if (cfg.theta < 0.0) throw ConfigError("config: theta must be >= 0");
  cfg.picard = rc.picard;
  cfg.heat = rc.heat;

  cfg.initial = TemperatureField(cfg.mesh.cell_count());
  for (std::size_t c = 0; c < cfg.initial.size(); ++c) {
    const double v = rc.T0(0.0, cfg.mesh.cell_center(c));
    if (!std::isfinite(v) || v < 0.0)
      throw ConfigError("config: initial.T0 must be finite and >= 0 on the mesh");
    cfg.initial.values[c] = v;
  }

  for (int n = 0; n < cfg.time.levels(); ++n) {
    const double t = cfg.time.time(n);
    for (const auto& f : cfg.mesh.boundary_faces()) {
      const double gv = g(t, f.center);
      if (!std::isfinite(gv) || gv < 0.0)
        throw ConfigError("config: boundary.g must be finite and >= 0 on the boundary");
      const double iv = ib(t, f.center);
      if (!std::isfinite(iv) || iv < 0.0)
        throw ConfigError("config: inflow.ib must be finite and >= 0 on the boundary");
    }
  }

  if (cfg.bc.family() == BoundaryFamily::dirichlet) {
    for (const auto& f : cfg.mesh.boundary_faces()) {
      const double trace = rc.T0(0.0, f.center);
      const double value = g(0.0, f.center) / rc.bc_b;
      if (std::abs(trace - value) > 1e-8 * (1.0 + std::abs(value)))
        throw ConfigError(
            "config: Dirichlet compatibility violated: T0 != g(0)/b on the boundary");
    }
  }
  return cfg;
}

}  // namespace radcon
