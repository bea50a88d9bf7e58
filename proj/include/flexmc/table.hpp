#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flexmc {

/// Columnar result with '#'-prefixed metadata lines.
struct Table {
  std::vector<std::string> meta;     // emitted as "# <line>"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& line) { meta.push_back(line); }
  void add_row(std::vector<double> row);
};

/// Scientific notation with 9 significant digits.
std::string format_float(double v);

void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);

} // namespace flexmc
