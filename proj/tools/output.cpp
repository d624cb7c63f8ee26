#include "output.hpp"

#include <cmath>
#include <cstdio>

#include "config.hpp"

namespace bonusruin::cli {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "jsonl" || name == "json-lines") return Format::jsonl;
  throw ConfigError("format", "format must be csv or jsonl, got '" + name + "'");
}

void Table::add(Json row) {
  Json ordered = Json::object();
  for (const auto& c : columns) ordered[c] = row.contains(c) ? row[c] : Json(nullptr);
  rows.push_back(std::move(ordered));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

void write_table(std::ostream& out, Format format, const Json& metadata, const Table& table) {
  if (format == Format::jsonl) {
    out << metadata.dump() << '\n';
    for (const auto& row : table.rows) {
      Json line = Json::object();
      line["record"] = "row";
      for (const auto& [k, v] : row.items()) line[k] = v;
      out << line.dump() << '\n';
    }
    return;
  }
  out << "# bonusruin " << metadata.value("command", "") << '\n';
  if (metadata.contains("config")) {
    for (const auto& [k, v] : metadata["config"].items()) {
      out << "# " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << csv_cell(row[table.columns[i]]);
    }
    out << '\n';
  }
}

}  // namespace bonusruin::cli
