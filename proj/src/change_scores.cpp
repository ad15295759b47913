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

#include "lsc/change_scores.hpp"

#include <algorithm>

#include "lsc/text.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

KnThresholds kn_thresholds(std::size_t usage_count) {
  if (usage_count < 1) throw PreconditionError("kn_thresholds: usage count must be at least 1");
  const double u = static_cast<double>(usage_count);
  return {std::clamp(0.01 * u, 1.0, 3.0), std::clamp(0.1 * u, 3.0, 5.0)};
}

double graded_change(const SenseFrequencyDistribution& d1, const SenseFrequencyDistribution& d2) {
  if (d1.counts.size() != d2.counts.size()) throw PreconditionError("graded_change: length mismatch");
  if (d1.counts.sum() <= 0 || d2.counts.sum() <= 0)
    throw UndefinedError("graded change undefined: a period has no usages");
  return jsd_distance(normalize_counts(d1.counts), normalize_counts(d2.counts));
}

BinaryScores binary_scores(const Eigen::VectorXi& d1, const Eigen::VectorXi& d2, KnThresholds first,
                           KnThresholds second, KnRounding rounding) {
  if (d1.size() != d2.size()) throw PreconditionError("binary_scores: length mismatch");
  if (rounding == KnRounding::nearest) {
    for (auto* t : {&first, &second}) {
      t->k = std::round(t->k);
      t->n = std::round(t->n);
    }
  }
  BinaryScores s;
  for (Eigen::Index c = 0; c < d1.size(); ++c) {
    if (d1(c) <= first.k && d2(c) >= second.n) s.gain = 1;
    if (d2(c) <= second.k && d1(c) >= first.n) s.loss = 1;
  }
  s.binary = s.gain | s.loss;
  return s;
}

double compare_score(const WordUsageGraph& g) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : g.edges()) {
    if (g.nodes()[e.u].period == g.nodes()[e.v].period) continue;
    sum += e.weight;
    ++n;
  }
  if (n == 0) throw UndefinedError("COMPARE undefined for '" + g.lemma() + "': no cross-period edges");
  return -sum / static_cast<double>(n);
}

ChangeScores derive_change_scores(const WordUsageGraph& g, const Clustering& c, const ChangeOptions& opts) {
  ChangeScores s;
  s.lemma = g.lemma();
  auto [d1, d2] = split_distributions(g, c);
  const int u1 = d1.counts.sum();
  const int u2 = d2.counts.sum();
  if (u1 > 0) s.kn_c1 = kn_thresholds(static_cast<std::size_t>(u1));
  if (u2 > 0) s.kn_c2 = kn_thresholds(static_cast<std::size_t>(u2));
  if (u1 > 0 && u2 > 0) {
    s.graded = graded_change(d1, d2);
    auto b = binary_scores(d1.counts, d2.counts, s.kn_c1, s.kn_c2, opts.rounding);
    s.binary = b.binary;
    s.gain = b.gain;
    s.loss = b.loss;
  }
  try {
    s.compare = compare_score(g);
  } catch (const UndefinedError&) {
  }
  return s;
}

namespace {

std::string fmt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::optional<int> parse_label(std::string_view s, const std::string& src, std::size_t line) {
  auto v = parse_optional(s, src, line);
  if (!v) return std::nullopt;
  if (*v != 0.0 && *v != 1.0) throw ParseError(src, line, "binary label must be 0 or 1");
  return static_cast<int>(*v);
}

}  // namespace

void write_gold_scores(const std::map<std::string, ChangeScores>& scores, const std::filesystem::path& path,
                       std::uint64_t seed) {
  TsvWriter w(path, seed, kGoldColumns);
  for (const auto& [lemma, s] : scores)
    w.row({lemma, format_optional(s.graded), fmt_int(s.binary), fmt_int(s.gain), fmt_int(s.loss),
           format_optional(s.compare)});
}

std::map<std::string, ChangeScores> read_gold_scores(const std::filesystem::path& path) {
  auto t = TsvTable::read(path);
  std::map<std::string, ChangeScores> out;
  const auto& src = t.source();
  for (std::size_t r = 0; r < t.size(); ++r) {
    const auto line = t.line_of(r);
    ChangeScores s;
    s.lemma = normalize_lemma(t.at(r, "lemma"));
    s.graded = parse_optional(t.at(r, "change_graded"), src, line);
    s.binary = parse_label(t.at(r, "change_binary"), src, line);
    if (t.has_column("gain")) s.gain = parse_label(t.at(r, "gain"), src, line);
    if (t.has_column("loss")) s.loss = parse_label(t.at(r, "loss"), src, line);
    if (t.has_column("compare")) s.compare = parse_optional(t.at(r, "compare"), src, line);
    if (!out.emplace(s.lemma, s).second) throw ParseError(src, line, "duplicate lemma '" + s.lemma + "'");
  }
  return out;
}

}  // namespace lsc
