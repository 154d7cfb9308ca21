#pragma once

// Command output model. Every command builds one Report; the renderer turns
// it into JSON, CSV (first table only) or an aligned text table.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace qstatic::cli {

enum class Format { json, csv, table };

inline constexpr int kMachineDigits = 12;
inline constexpr int kTableDigits = 6;
inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  nlohmann::json document;            // carries "schema" and "command"
  std::vector<std::string> heading;   // lines above the tables in table format
  std::vector<Table> tables;          // tables[0] is the CSV payload
  std::vector<std::string> notes;
};

/// %.{digits}g with negative zero folded to zero.
std::string format_number(double value, int digits);

/// `value` rounded to kMachineDigits significant digits, as a JSON number.
nlohmann::json json_number(double value);

void render(const Report& report, Format format, std::ostream& out);

}  // namespace qstatic::cli
