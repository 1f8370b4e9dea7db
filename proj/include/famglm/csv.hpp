/*
 * Copyright 2026 The famglm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "famglm/core.hpp"

namespace famglm {

/// Shortest-exact decimal rendering: 17 significant digits always round-trip
/// an IEEE double.
inline std::string format_float(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

inline double parse_float(const std::string& text) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    require(used == text.size(), errc::malformed_file,
            "not a number: '" + text + "'");
    return value;
  } catch (const std::invalid_argument&) {
    fail(errc::malformed_file, "not a number: '" + text + "'");
  } catch (const std::out_of_range&) {
    fail(errc::malformed_file, "number out of range: '" + text + "'");
  }
}

namespace detail {

inline bool csv_needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

inline std::string csv_escape(const std::string& field) {
  if (!csv_needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// Streaming RFC-4180 writer (CRLF line endings, quoting on demand).
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : stream_(path, std::ios::binary) {
    require(stream_.good(), errc::io_error, "cannot open " + path.string() + " for writing");
    path_ = path.string();
  }

  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) stream_ << ',';
      stream_ << detail::csv_escape(fields[i]);
    }
    stream_ << "\r\n";
    require(stream_.good(), errc::io_error, "write failed on " + path_);
  }

 private:
  std::ofstream stream_;
  std::string path_;
};

/// Parses a whole CSV file into rows of fields. Handles quoted fields,
/// doubled quotes, and either line ending. Empty trailing lines are dropped.
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  require(stream.good(), errc::io_error, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << stream.rdbuf();
  const std::string text = buffer.str();

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(row);
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        end_field();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_content || !row.empty() || !field.empty()) end_row();
        break;
      default:
        field += c;
        row_has_content = true;
        break;
    }
  }
  require(!in_quotes, errc::malformed_file, path.string() + ": unterminated quote");
  if (row_has_content || !row.empty() || !field.empty()) end_row();
  return rows;
}

}  // namespace famglm
