#pragma once

// Canonical CSV: comma separators, LF endings, doubles printed with %.9g.
// The numeric format is round-trip stable (parse + reformat reproduces the
// bytes), which the CLI relies on for its determinism guarantees.  Fields
// must not contain commas or newlines; camera ids are validated accordingly.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mvcov/errors.hpp"

namespace mvcov::csv {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

inline std::string format_int(long long v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return std::string(buf);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string serialize() const {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
      }
      out += '\n';
    };
    append_row(header);
    for (const auto& row : rows) append_row(row);
    return out;
  }

  static Table parse(const std::string& text) {
    Table table;
    std::vector<std::string> line_fields;
    std::string field;
    bool first_line = true;
    auto flush_line = [&]() {
      line_fields.push_back(field);
      field.clear();
      if (first_line) {
        table.header = std::move(line_fields);
        first_line = false;
      } else {
        table.rows.push_back(std::move(line_fields));
      }
      line_fields.clear();
    };
    for (char c : text) {
      if (c == '\n') {
        flush_line();
      } else if (c == ',') {
        line_fields.push_back(field);
        field.clear();
      } else if (c == '\r') {
        throw ValidationError("CSV must use LF line endings");
      } else {
        field += c;
      }
    }
    if (!field.empty() || !line_fields.empty())
      throw ValidationError("CSV must end with a newline");
    if (table.header.empty()) throw ValidationError("CSV has no header");
    return table;
  }
};

}  // namespace mvcov::csv
