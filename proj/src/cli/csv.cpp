#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "yule/cli.hpp"
#include "yule/errors.hpp"

namespace yule::cli {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    yule::detail::fail_domain("malformed CSV number '" + cell + "'");
  return x;
}

}  // namespace

Table parse_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (header) {
      table.columns = cells;
      header = false;
      continue;
    }
    if (cells.size() != table.columns.size()) yule::detail::fail_domain("CSV row width differs from header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace yule::cli
