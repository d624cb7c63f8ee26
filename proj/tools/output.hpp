#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace bonusruin::cli {

using Json = nlohmann::ordered_json;

enum class Format { csv, jsonl };

Format parse_format(const std::string& name);

/// Result rows of one command. Every row holds a value (possibly null) for every column.
struct Table {
  std::vector<std::string> columns;
  std::vector<Json> rows;

  void add(Json row);
};

/// Doubles with 17 significant digits, so values round-trip exactly.
std::string format_double(double v);

/// CSV: '#' comment lines carrying the metadata, then the header and one line per row.
/// JSON lines: a metadata object, then one object per row.
void write_table(std::ostream& out, Format format, const Json& metadata, const Table& table);

}  // namespace bonusruin::cli
