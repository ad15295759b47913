// Copyright 2026 The LSC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lsc {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Provenance comment written as the first line of every output file.
std::string provenance_line(std::uint64_t seed);

// Tab-separated table with a header row. Lines starting with '#' before the
// header, and anywhere in the body, are comments.
class TsvTable {
 public:
  static TsvTable read(const std::filesystem::path& path);
  static TsvTable parse(std::string_view text, const std::string& source = "<memory>");

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }
  bool has_column(std::string_view name) const;

  // Throws FormatError naming the file when the column is absent.
  std::size_t column(std::string_view name) const;

  const std::string& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  const std::string& at(std::size_t row, std::string_view name) const { return rows_[row][column(name)]; }
  std::size_t line_of(std::size_t row) const { return lines_[row]; }
  const std::string& source() const { return source_; }

  // Key/value pairs found in comment lines ("# key=value key=value").
  const std::map<std::string, std::string>& meta() const { return meta_; }

 private:
  std::string source_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
  std::map<std::string, std::string> meta_;
};

// Headerless two-or-more column rows, '#' lines skipped.
struct RawRow {
  std::size_t line;
  std::vector<std::string> fields;
};
std::vector<RawRow> read_raw_rows(const std::filesystem::path& path);

class TsvWriter {
 public:
  // Writes the provenance line (plus optional extra key=value meta) and, when
  // columns is non-empty, a header row.
  TsvWriter(const std::filesystem::path& path, std::uint64_t seed, const std::vector<std::string>& columns,
            const std::vector<std::pair<std::string, std::string>>& meta = {});

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);
double parse_double(std::string_view s, const std::string& source, std::size_t line);
std::optional<double> parse_optional(std::string_view s, const std::string& source, std::size_t line);

}  // namespace lsc
