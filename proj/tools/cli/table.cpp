#include "cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cvmdi::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

}  // namespace

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value, digits).c_str(), nullptr);
}

void write_csv(std::ostream& os, const Table& table, const Provenance& provenance,
               int digits) {
  os << "# cvmdi " << kVersion << ' ' << provenance.command
     << " config=" << provenance.config.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << csv_field(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        os << format_number(*d, digits);
      } else if (const auto* s = std::get_if<std::string>(&row[i])) {
        os << csv_field(*s);
      }
    }
    os << '\n';
  }
}

Json to_json(const Table& table, const Provenance& provenance, int digits) {
  Json out;
  out["metadata"] = {{"tool", "cvmdi"},
                     {"version", std::string(kVersion)},
                     {"command", provenance.command},
                     {"config", provenance.config}};
  for (const auto& item : provenance.extra.items()) {
    out["metadata"][item.key()] = item.value();
  }
  out["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& name = table.columns[i];
      if (const auto* d = std::get_if<double>(&row[i])) {
        r[name] = std::isfinite(*d) ? Json(round_significant(*d, digits))
                                    : Json(format_number(*d, digits));
      } else if (const auto* s = std::get_if<std::string>(&row[i])) {
        r[name] = *s;
      } else {
        r[name] = nullptr;
      }
    }
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  return out;
}

}  // namespace cvmdi::cli
