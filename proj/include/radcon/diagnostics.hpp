#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "radcon/config.hpp"
#include "radcon/estimates.hpp"
#include "radcon/fixedpoint.hpp"

namespace radcon {

inline ordered_json ledger_json(const NormLedger& ledger) {
  ordered_json j;
  for (const auto& [name, value] : ledger.entries) j[name] = value;
  return j;
}

inline ordered_json estimate_rows_json(const EstimateReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["tag"] = r.tag;
    row["name"] = r.name;
    row["kind"] = to_string(r.kind);
    if (r.kind != RowKind::inapplicable) {
      row["lhs"] = r.lhs;
      row["rhs"] = r.rhs;
      if (std::isfinite(r.slack)) row["slack"] = r.slack;
      row["satisfied"] = r.satisfied;
    }
    row["note"] = r.note;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ordered_json trace_json(const PicardTrace& trace) {
  ordered_json j;
  j["mode"] = trace.mode;
  j["converged"] = trace.converged;
  if (!trace.note.empty()) j["note"] = trace.note;
  ordered_json iters = ordered_json::array();
  for (const auto& it : trace.iterations) {
    ordered_json rec;
    rec["index"] = it.index;
    rec["residual"] = it.residual;
    rec["relative_residual"] = it.relative_residual;
    if (std::isfinite(it.ratio)) rec["ratio"] = it.ratio;
    rec["ledger"] = ledger_json(it.ledger);
    iters.push_back(std::move(rec));
  }
  j["iterations"] = std::move(iters);
  if (!trace.step_inner_iterations.empty())
    j["step_inner_iterations"] = trace.step_inner_iterations;
  return j;
}

inline ordered_json diagnostics_document(const RunConfig& rc,
                                         const ScenarioConfig& cfg,
                                         const CoupledSolution& sol,
                                         const EstimateReport& report) {
  ordered_json doc;
  doc["schema"] = "radcon-diagnostics-v1";
  doc["run"]["config"] = normalize(rc);
  doc["run"]["seed"] = rc.seed;
  doc["run"]["mode"] = sol.trace.mode;
  doc["run"]["converged"] = sol.converged;
  if (sol.converged) {
    doc["norms"] = ledger_json(compute_norms(sol, cfg));
    doc["residuals"]["transport"] = sol.transport_residual;
    doc["residuals"]["heat"] = sol.heat_residual;
    doc["residuals"]["heat_relative"] = sol.heat_residual_rel;
    doc["residuals"]["tolerance_factor"] = sol.heat_residual_rel / cfg.picard.tol;
  }
  doc["estimates"] = estimate_rows_json(report);
  doc["picard"] = trace_json(sol.trace);
  return doc;
}

namespace diag_detail {

inline void append_big_endian(std::string& out, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<char>((bits >> shift) & 0xff));
}

}  // namespace diag_detail

// Plain-text field snapshot: one row per cell, cell center plus value.
inline void write_field_csv(const std::filesystem::path& path, const BoxMesh& mesh,
                            const std::vector<double>& values,
                            const std::string& column) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "x1,x2,x3," << column << "\n";
  char line[128];
  for (std::size_t c = 0; c < values.size(); ++c) {
    const Vec3 x = mesh.cell_center(c);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", x[0], x[1], x[2],
                  values[c]);
    out << line;
  }
}

// Legacy structured-points file with big-endian binary cell data.
inline void write_field_vtk(const std::filesystem::path& path, const BoxMesh& mesh,
                            const std::vector<double>& values,
                            const std::string& name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# vtk DataFile Version 3.0\n"
      << "radcon field snapshot\n"
      << "BINARY\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << mesh.cells_per_axis(0) + 1 << ' '
      << mesh.cells_per_axis(1) + 1 << ' ' << mesh.cells_per_axis(2) + 1 << "\n"
      << "ORIGIN 0 0 0\n"
      << "SPACING " << mesh.spacing(0) << ' ' << mesh.spacing(1) << ' '
      << mesh.spacing(2) << "\n"
      << "CELL_DATA " << values.size() << "\n"
      << "SCALARS " << name << " double 1\n"
      << "LOOKUP_TABLE default\n";
  std::string payload;
  payload.reserve(values.size() * 8);
  for (double v : values) diag_detail::append_big_endian(payload, v);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

// Field snapshots for the configured cadence: temperature and incident
// radiation per selected time level.
inline void write_field_outputs(const RunConfig& rc, const ScenarioConfig& cfg,
                                const CoupledSolution& sol,
                                const std::filesystem::path& dir) {
  if (!rc.output.fields) return;
  char name[64];
  for (int n = 0; n < cfg.time.levels(); ++n) {
    if (n % rc.output.cadence != 0 && n != cfg.time.steps) continue;
    std::snprintf(name, sizeof(name), "T_%04d.csv", n);
    write_field_csv(dir / name, cfg.mesh, sol.temperature[n].values, "T");
    std::snprintf(name, sizeof(name), "G_%04d.csv", n);
    write_field_csv(dir / name, cfg.mesh, sol.incident[n], "G");
    if (rc.output.vtk) {
      std::snprintf(name, sizeof(name), "T_%04d.vtk", n);
      write_field_vtk(dir / name, cfg.mesh, sol.temperature[n].values, "T");
    }
  }
}

}  // namespace radcon
