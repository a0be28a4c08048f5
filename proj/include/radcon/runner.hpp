#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "radcon/diagnostics.hpp"
#include "radcon/suites.hpp"

namespace radcon {

// CLI exit codes (stable, used by CI).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitCheckFailed = 4;

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_run_config(j);
}

// Full run: solve, check, write artifacts. Returns the CLI exit code.
inline int run_from_config(const RunConfig& rc, const std::string& output_dir,
                           const Parallel& par, std::ostream& log = std::cout) {
  ScenarioConfig cfg = build_scenario(rc);

  const std::filesystem::path dir(output_dir);
  std::filesystem::create_directories(dir);

  CoupledSolution sol = picard_solve(cfg, par);

  EstimateReport report;
  report.tol = rc.checks.tol;
  if (sol.converged) {
    if (rc.checks.transport) {
      const auto split = transport_split_stage(sol.temperature, cfg, par);
      for (auto& r :
           check_transport_estimates(split, sol.temperature, cfg, rc.checks.tol).rows)
        report.rows.push_back(std::move(r));
    }
    if (rc.checks.l8)
      for (auto& r : check_L8_bounds(sol, cfg, rc.checks.tol).rows)
        report.rows.push_back(std::move(r));
    if (rc.checks.g_estimate)
      for (auto& r : check_G_estimate(sol, cfg, rc.checks.tol).rows)
        report.rows.push_back(std::move(r));
  }

  const ordered_json doc = diagnostics_document(rc, cfg, sol, report);
  {
    std::ofstream out(dir / "diagnostics.json");
    out << doc.dump(2) << "\n";
  }
  if (sol.converged) write_field_outputs(rc, cfg, sol, dir);

  if (!sol.converged) {
    log << "radcon: solver did not converge";
    if (!sol.trace.note.empty()) log << " (" << sol.trace.note << ")";
    log << "\n";
    return kExitNotConverged;
  }
  if (!report.all_asserted_pass()) {
    for (const auto& r : report.rows)
      if (r.kind == RowKind::asserted && !r.satisfied)
        log << "radcon: estimate check failed: " << r.tag << " lhs=" << r.lhs
            << " rhs=" << r.rhs << "\n";
    return kExitCheckFailed;
  }
  log << "radcon: converged in " << sol.trace.mode << " mode; diagnostics at "
      << (dir / "diagnostics.json").string() << "\n";
  return kExitOk;
}

inline int run_command(const std::string& config_path,
                       const std::optional<std::string>& output_override,
                       int threads, const std::optional<std::uint64_t>& seed_override,
                       std::ostream& log = std::cout) {
  RunConfig rc;
  try {
    rc = load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "radcon: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (seed_override) rc.seed = *seed_override;
  std::string out_dir = rc.output.directory;
  if (output_override) {
    out_dir = *output_override;
  } else if (const char* env = std::getenv("RADCON_OUTPUT_DIR")) {
    out_dir = env;
  }
  try {
    return run_from_config(rc, out_dir, Parallel{threads}, log);
  } catch (const ConfigError& e) {
    std::cerr << "radcon: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "radcon: " << e.what() << "\n";
    return kExitConfigError;
  }
}

// Parse and validate only; prints the normalized configuration.
inline int check_command(const std::string& config_path, std::ostream& out = std::cout) {
  try {
    const RunConfig rc = load_run_config(config_path);
    build_scenario(rc);  // full data validation
    out << normalize(rc).dump(2) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "radcon: " << e.what() << "\n";
    return kExitConfigError;
  }
}

inline int suite_command(const std::string& name, std::uint64_t seed, int threads,
                         std::ostream& out = std::cout) {
  suites::SuiteResult result;
  try {
    result = suites::run_suite(name, seed, Parallel{threads});
  } catch (const std::invalid_argument& e) {
    std::cerr << "radcon: " << e.what() << "\n";
    return kExitConfigError;
  }
  ordered_json doc;
  doc["suite"] = result.name;
  doc["passed"] = result.passed;
  doc["report"] = result.report;
  out << doc.dump(2) << "\n";
  return result.passed ? kExitOk : kExitCheckFailed;
}

}  // namespace radcon
