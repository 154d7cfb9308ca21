#include "qstatic/report.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

namespace qstatic::cli {
namespace {

std::string cell_text(const Cell& cell, int digits) {
  if (const auto* x = std::get_if<double>(&cell)) return format_number(*x, digits);
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return {};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void render_csv(const Report& report, std::ostream& out) {
  if (report.tables.empty()) return;
  const Table& table = report.tables.front();
  auto line = [&](const auto& fields, auto to_text) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_escape(to_text(fields[i]));
    }
    out << '\n';
  };
  line(table.columns, [](const std::string& s) { return s; });
  for (const auto& row : table.rows) {
    line(row, [](const Cell& c) { return cell_text(c, kMachineDigits); });
  }
}

void render_table(const Report& report, std::ostream& out) {
  for (const auto& line : report.heading) out << line << '\n';
  for (const auto& table : report.tables) {
    out << '\n';
    if (!table.title.empty()) out << table.title << '\n';
    std::vector<std::size_t> widths;
    for (const auto& column : table.columns) widths.push_back(column.size());
    std::vector<std::vector<std::string>> texts;
    for (const auto& row : table.rows) {
      auto& text = texts.emplace_back();
      for (std::size_t i = 0; i < row.size(); ++i) {
        text.push_back(cell_text(row[i], kTableDigits));
        widths[i] = std::max(widths[i], text.back().size());
      }
    }
    auto emit = [&](const std::vector<std::string>& fields) {
      std::string line;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += "  ";
        line += fmt::format("{:<{}}", fields[i], widths[i]);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << "  " << line << '\n';
    };
    emit(table.columns);
    for (const auto& text : texts) emit(text);
  }
  if (!report.notes.empty()) out << '\n';
  for (const auto& note : report.notes) out << "note: " << note << '\n';
}

}  // namespace

std::string format_number(double value, int digits) {
  if (value == 0.0) value = 0.0;
  std::string text = fmt::format("{:.{}g}", value, digits);
  if (text == "-0") text = "0";
  return text;
}

nlohmann::json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  const double rounded = std::stod(format_number(value, kMachineDigits));
  if (rounded == std::floor(rounded) && std::abs(rounded) < 1e15) {
    return static_cast<long long>(rounded);
  }
  return rounded;
}

void render(const Report& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::json:
      out << report.document.dump(2) << '\n';
      break;
    case Format::csv:
      render_csv(report, out);
      break;
    case Format::table:
      render_table(report, out);
      break;
  }
}

}  // namespace qstatic::cli
