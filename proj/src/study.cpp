#include "hullcap/study.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hullcap/errors.hpp"

namespace hullcap {

void StudyTable::add_row(std::vector<double> row) {
  require(row.size() == columns.size(), "study table row has the wrong number of columns");
  rows.push_back(std::move(row));
}

std::vector<double> StudyTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& r : rows) out.push_back(r[c]);
      return out;
    }
  }
  throw InvalidArgument("study table has no column '" + std::string(name) + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string StudyTable::to_csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << format_double(r[c]) << (c + 1 < r.size() ? "," : "\n");
  }
  return os.str();
}

}  // namespace hullcap
