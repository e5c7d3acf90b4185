#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dsmopt::csv {

// Minimal RFC-4180-style CSV: fields containing commas, quotes or newlines
// are quoted, quotes are doubled. Rows end with LF.

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += quote(cells[i]);
  }
  out.push_back('\n');
  return out;
}

// Parses CSV text into rows of fields. Handles quoted fields with embedded
// commas, quotes and newlines. A trailing newline does not produce an empty
// final row.
inline std::vector<std::vector<std::string>> parse(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
      field_started = false;
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      // tolerated, dropped
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

}  // namespace dsmopt::csv
