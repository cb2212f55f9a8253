#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uavnet/errors.hpp"

namespace uavnet {

/// CSV with a fixed column order and full-precision floats; byte-stable for a
/// given sequence of rows so runs can be compared exactly.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void add_row(const std::vector<std::string>& cells);
  static std::string number(double value);  // shortest round-trip decimal

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Everything needed to replay a run byte-for-byte.
struct RunManifest {
  int schema_version = 0;
  std::string tool_version;
  std::string kind;
  std::uint64_t seed = 0;
  long trials = 0;
  std::map<std::string, std::string> scenario;  // fully resolved, file schema
  std::vector<std::string> overrides;           // as given on the command line
  std::map<std::string, std::string> grid;      // axis -> "start:stop:step"
  std::map<std::string, std::string> extras;    // kind-specific knobs
  std::string output_csv;                       // path of the data file
  double wall_time_s = 0.0;

  void write(const std::string& path) const;
  static RunManifest read(const std::string& path);
};

struct ColumnDiff {
  std::string column;
  double max_abs = 0.0;
  double max_rel = 0.0;
};

struct DiffReport {
  bool comparable = false;  // same kind, schema and shape
  bool within_tol = false;
  std::string message;
  std::vector<ColumnDiff> columns;
};

/// Column-wise comparison of two runs of the same kind; numeric cells compare
/// by value, everything else must match exactly.
DiffReport diff_runs(const std::string& manifest_a, const std::string& manifest_b,
                     double rel_tol = 0.0, double abs_tol = 0.0);

}  // namespace uavnet
