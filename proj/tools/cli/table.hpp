#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "cli/config.hpp"

namespace cvmdi::cli {

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;  // names carry units, e.g. "K[bits/use]"
  std::vector<std::vector<Cell>> rows;
};

struct Provenance {
  std::string command;
  Json config;
  Json extra = Json::object();  // command-specific metadata
};

/// Value rounded to `digits` significant digits (what "%.*g" prints).
double round_significant(double value, int digits);
std::string format_number(double value, int digits);

/// "# cvmdi <version> <command> config=<compact json>" line, header, rows.
/// LF line endings, "." decimal separator, fields quoted only when needed.
void write_csv(std::ostream& os, const Table& table, const Provenance& provenance,
               int digits);

/// {"metadata": {...}, "columns": [...], "rows": [{column: value}]}, with
/// numbers rounded to `digits` significant digits.
Json to_json(const Table& table, const Provenance& provenance, int digits);

}  // namespace cvmdi::cli
