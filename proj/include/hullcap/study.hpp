#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hullcap {

/// Outcome of an iterative solve.
struct SolveReport {
  std::string solver;
  int iterations = 0;
  double objective = 0.0;
  double dual_objective = 0.0;
  /// Relative primal-dual gap, or the last relative change for non-dual solvers.
  double gap = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::vector<std::string> notes;
};

/// Keyed numeric table with provenance metadata, emitted as CSV.
struct StudyTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  StudyTable() = default;
  explicit StudyTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

  void add_row(std::vector<double> row);
  [[nodiscard]] std::vector<double> column(std::string_view name) const;
  [[nodiscard]] std::size_t size() const { return rows.size(); }
  /// Metadata as leading "# key: value" lines, then a header and one line per row.
  [[nodiscard]] std::string to_csv() const;
};

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace hullcap
