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

#include "lsc/tsv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "lsc/error.hpp"
#include "lsc/text.hpp"

namespace lsc {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void parse_meta(std::string_view comment, std::map<std::string, std::string>& meta) {
  for (const auto& field : split_ws(comment)) {
    auto eq = field.find('=');
    if (eq != std::string::npos && eq > 0) meta[field.substr(0, eq)] = field.substr(eq + 1);
  }
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++lineno, line);
    start = end + 1;
  }
}

}  // namespace

std::string provenance_line(std::uint64_t seed) {
  return "# lsc-toolkit version=" + std::string(kToolVersion) + " seed=" + std::to_string(seed);
}

TsvTable TsvTable::read(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

TsvTable TsvTable::parse(std::string_view text, const std::string& source) {
  TsvTable t;
  t.source_ = source;
  bool have_header = false;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (!line.empty() && line.front() == '#') {
      parse_meta(line.substr(1), t.meta_);
      return;
    }
    if (trim(line).empty()) return;
    auto fields = split(line, '\t');
    if (!have_header) {
      t.columns_ = std::move(fields);
      have_header = true;
      return;
    }
    // Trailing empty optional fields may have been dropped by editors.
    if (fields.size() < t.columns_.size()) fields.resize(t.columns_.size());
    if (fields.size() > t.columns_.size())
      throw ParseError(source, lineno,
                       "expected " + std::to_string(t.columns_.size()) + " fields, got " +
                           std::to_string(fields.size()));
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(lineno);
  });
  if (!have_header) throw FormatError(source + ": missing header row");
  return t;
}

bool TsvTable::has_column(std::string_view name) const {
  for (const auto& c : columns_)
    if (c == name) return true;
  return false;
}

std::size_t TsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw FormatError(source_ + ": missing column '" + std::string(name) + "'");
}

std::vector<RawRow> read_raw_rows(const std::filesystem::path& path) {
  std::vector<RawRow> rows;
  std::string text = read_file(path);
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    rows.push_back({lineno, split(line, '\t')});
  });
  return rows;
}

TsvWriter::TsvWriter(const std::filesystem::path& path, std::uint64_t seed, const std::vector<std::string>& columns,
                     const std::vector<std::pair<std::string, std::string>>& meta)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw Error("cannot write " + path.string());
  out_ << provenance_line(seed);
  for (const auto& [k, v] : meta) out_ << ' ' << k << '=' << v;
  out_ << '\n';
  if (!columns.empty()) row(columns);
}

void TsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << '\t';
    out_ << fields[i];
  }
  out_ << '\n';
  if (!out_) throw Error("write failed: " + path_.string());
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double parse_double(std::string_view s, const std::string& source, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(source, line, "not a finite number: '" + std::string(s) + "'");
  return v;
}

std::optional<double> parse_optional(std::string_view s, const std::string& source, std::size_t line) {
  s = trim(s);
  if (s.empty() || s == "NA" || s == "nan") return std::nullopt;
  return parse_double(s, source, line);
}

}  // namespace lsc
