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

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsc/wug.hpp"

namespace lsc {

enum class AlphaMetric { ordinal, interval };
enum class ExpectedFrom { local, pooled };

// Value -> number of pairable occurrences (values in units coded at least twice).
using ValueCounts = std::map<int, double>;

// Reliability units: one per usage pair, holding its non-zero judgments.
std::vector<std::vector<int>> reliability_units(std::span<const Judgment> judgments);
ValueCounts pairable_values(const std::vector<std::vector<int>>& units);

// Krippendorff's alpha over reliability units. With a pool, the value
// distribution behind the expected disagreement (and the ordinal metric) is
// taken from the pool instead of from the units themselves.
double krippendorff_alpha_units(const std::vector<std::vector<int>>& units, AlphaMetric metric,
                                const ValueCounts* pool = nullptr);

double krippendorff_alpha(std::span<const Judgment> judgments, ExpectedFrom expected_from,
                          AlphaMetric metric = AlphaMetric::ordinal, const ValueCounts* pool = nullptr);

// Mean of per-annotator-pair Spearman correlations over co-judged usage pairs,
// weighted by the number of co-judged pairs. Annotator pairs with fewer than
// two shared items or constant judgments are skipped.
double pairwise_spearman_mean(std::span<const Judgment> judgments);

struct WordAgreement {
  std::optional<double> alpha_local;
  std::optional<double> alpha_pooled;
  std::optional<double> spearman;
  std::size_t judgment_count = 0;  // non-zero judgments
  std::size_t judged_pairs = 0;
  std::size_t annotators = 0;
};

struct AgreementReport {
  std::map<std::string, WordAgreement> per_word;
  WordAgreement global;
};

// Judgments must carry their lemma.
AgreementReport agreement_report(std::span<const Judgment> judgments, AlphaMetric metric = AlphaMetric::ordinal);

struct AgreementFilter {
  std::vector<std::string> kept;
  std::vector<std::string> discarded;
};

// A word is discarded when both alphas fall below threshold; an undefined
// alpha counts as below only when the other is undefined too.
AgreementFilter filter_words_by_agreement(const AgreementReport& report, double threshold = 0.3);

// Per-word context for the data overview table.
struct WordOverview {
  std::string pos;
  std::size_t usages = 0;
  std::optional<std::size_t> uncompared;
  std::optional<double> normalized_loss;
  std::optional<int> binary;
  std::optional<double> graded;
};

struct OverviewRow {
  std::string label;
  std::size_t n = 0;
  std::size_t nouns = 0, verbs = 0, adj_adv = 0;
  std::optional<double> avg_usages;
  std::size_t annotators = 0;
  std::size_t judged_pairs = 0;
  std::optional<double> avg_judgments;
  std::optional<double> kri, spr, unc, loss_x10, lsc_b, lsc_g;
};

// Aggregates the given words into one overview row.
OverviewRow overview_row(const std::string& label, const std::vector<std::string>& words,
                         std::span<const Judgment> judgments, const std::map<std::string, WordOverview>& info,
                         AlphaMetric metric = AlphaMetric::ordinal);

void write_agreement_report(const AgreementReport& report, const std::vector<OverviewRow>& overview,
                            const std::filesystem::path& path, std::uint64_t seed);

}  // namespace lsc
