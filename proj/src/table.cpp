#include "flexmc/table.hpp"

#include <cstdio>

#include <json.hpp>

#include "flexmc/errors.hpp"

namespace flexmc {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw InternalError("table row width does not match column count");
  }
  rows.push_back(std::move(row));
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

void write_csv(const Table& t, std::ostream& out) {
  for (const auto& m : t.meta) out << "# " << m << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) {
    out << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
  }
  out << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << format_float(row[i]) << (i + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::json j;
  j["meta"] = t.meta;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) j["rows"].push_back(row);
  out << j.dump(2) << "\n";
}

} // namespace flexmc
