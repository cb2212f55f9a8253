#include "uavnet/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavnet/version.hpp"

namespace uavnet {

namespace {
namespace fs = std::filesystem;
using nlohmann::json;

bool looks_numeric(const std::string& cell) {
  if (cell.empty()) return false;
  char* end = nullptr;
  std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

}  // namespace

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw IoError("csv row width mismatch");
  rows_.push_back(cells);
}

std::string CsvTable::number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv '" + path + "'");
  CsvTable table(split(line));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    table.add_row(split(line));
  }
  return table;
}

void RunManifest::write(const std::string& path) const {
  json j;
  j["schema_version"] = schema_version;
  j["tool_version"] = tool_version;
  j["kind"] = kind;
  j["seed"] = seed;
  j["trials"] = trials;
  j["scenario"] = scenario;
  j["overrides"] = overrides;
  j["grid"] = grid;
  j["extras"] = extras;
  j["output_csv"] = output_csv;
  j["wall_time_s"] = wall_time_s;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

RunManifest RunManifest::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& err) {
    throw IoError("manifest parse error in '" + path + "': " + err.what());
  }
  RunManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.kind = j.at("kind").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.trials = j.at("trials").get<long>();
  m.scenario = j.at("scenario").get<std::map<std::string, std::string>>();
  m.overrides = j.at("overrides").get<std::vector<std::string>>();
  m.grid = j.at("grid").get<std::map<std::string, std::string>>();
  m.extras = j.at("extras").get<std::map<std::string, std::string>>();
  m.output_csv = j.at("output_csv").get<std::string>();
  m.wall_time_s = j.at("wall_time_s").get<double>();
  return m;
}

DiffReport diff_runs(const std::string& manifest_a, const std::string& manifest_b,
                     double rel_tol, double abs_tol) {
  DiffReport report;
  const RunManifest a = RunManifest::read(manifest_a);
  const RunManifest b = RunManifest::read(manifest_b);
  if (a.kind != b.kind || a.schema_version != b.schema_version) {
    report.message = "manifests disagree on kind or schema version";
    return report;
  }
  auto resolve = [](const std::string& manifest_path, const std::string& csv) {
    const fs::path p(csv);
    if (p.is_absolute()) return p;
    return fs::path(manifest_path).parent_path() / p;
  };
  const CsvTable csv_a = CsvTable::read(resolve(manifest_a, a.output_csv).string());
  const CsvTable csv_b = CsvTable::read(resolve(manifest_b, b.output_csv).string());
  if (csv_a.columns() != csv_b.columns()) {
    report.message = "csv column schemas differ";
    return report;
  }
  if (csv_a.rows().size() != csv_b.rows().size()) {
    report.message = "row counts differ (" +
                     std::to_string(csv_a.rows().size()) + " vs " +
                     std::to_string(csv_b.rows().size()) + ")";
    return report;
  }
  report.comparable = true;
  report.within_tol = true;
  report.columns.resize(csv_a.columns().size());
  for (std::size_t c = 0; c < csv_a.columns().size(); ++c)
    report.columns[c].column = csv_a.columns()[c];
  for (std::size_t r = 0; r < csv_a.rows().size(); ++r) {
    for (std::size_t c = 0; c < csv_a.columns().size(); ++c) {
      const std::string& cell_a = csv_a.rows()[r][c];
      const std::string& cell_b = csv_b.rows()[r][c];
      if (cell_a == cell_b) continue;
      if (looks_numeric(cell_a) && looks_numeric(cell_b)) {
        const double va = std::stod(cell_a);
        const double vb = std::stod(cell_b);
        const double abs_diff = std::fabs(va - vb);
        const double rel_diff =
            abs_diff / std::max({std::fabs(va), std::fabs(vb), 1e-300});
        auto& col = report.columns[c];
        col.max_abs = std::max(col.max_abs, abs_diff);
        col.max_rel = std::max(col.max_rel, rel_diff);
        if (abs_diff > abs_tol && rel_diff > rel_tol) report.within_tol = false;
      } else {
        report.within_tol = false;
        report.message = "non-numeric cell mismatch in column " +
                         csv_a.columns()[c] + " row " + std::to_string(r);
      }
    }
  }
  if (report.message.empty())
    report.message = report.within_tol ? "within tolerance" : "beyond tolerance";
  return report;
}

}  // namespace uavnet
