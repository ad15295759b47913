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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsc/baselines.hpp"
#include "lsc/change_scores.hpp"

namespace lsc {

using ScoreMap = std::map<std::string, double>;
using LabelMap = std::map<std::string, int>;

// strict: every gold word must be predicted (CoverageError otherwise).
// lenient: score on the intersection.
enum class Coverage { strict, lenient };

// Spearman's rho with average ranks for ties, over gold words.
double spearman(const ScoreMap& gold, const ScoreMap& pred, Coverage coverage = Coverage::strict);

struct BinaryMetrics {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Positive class 1. No predicted positives gives precision 0; no gold
// positives makes recall undefined (UndefinedError).
BinaryMetrics binary_metrics(const LabelMap& gold, const LabelMap& pred, Coverage coverage = Coverage::strict);

enum class Split { development, evaluation };

struct GoldSet {
  Split split = Split::evaluation;
  std::map<std::string, ChangeScores> words;

  ScoreMap graded() const;
  ScoreMap compare() const;
  LabelMap labels(Task task) const;
};

GoldSet read_gold_set(const std::filesystem::path& path, Split split = Split::evaluation);

enum class Phase { one = 1, two = 2 };

inline const std::map<Task, std::string> kSubmissionFiles = {{Task::graded, "graded.tsv"},
                                                             {Task::compare, "compare.tsv"},
                                                             {Task::binary, "binary.tsv"},
                                                             {Task::gain, "gain.tsv"},
                                                             {Task::loss, "loss.tsv"}};

struct SubtaskResult {
  Task task = Task::graded;
  std::optional<double> spearman;
  std::optional<BinaryMetrics> binary;
  std::size_t scored_words = 0;
  std::string note;
};

struct EvalReport {
  Phase phase = Phase::one;
  std::vector<SubtaskResult> results;
  std::vector<std::string> files_found;
  double coverage = 0.0;  // fraction of gold words present in the obligatory file
  std::vector<std::string> notes;
};

EvalReport score_submission(const GoldSet& gold, const std::filesystem::path& submission_dir, Phase phase,
                            Coverage coverage = Coverage::strict);

void write_eval_report(const EvalReport& report, const std::filesystem::path& path, std::uint64_t seed);
std::string format_eval_table(const EvalReport& report);

struct SweepPoint {
  double percentile = 0.0;
  double f1 = 0.0;
};

// Labels the top p% of words by score as changed (ties at the boundary
// included) and reports F1 for each percentile.
std::vector<SweepPoint> threshold_sweep(const LabelMap& gold, const ScoreMap& pred, std::span<const double> percentiles,
                                        Coverage coverage = Coverage::strict);

// 0, 5, ..., 100.
std::vector<double> default_percentiles();

// Mean performance of uniform random predictions over repeated draws.
struct RandomBaselineResult {
  double mean_spearman = 0.0;
  std::optional<double> mean_f1;
};
RandomBaselineResult evaluate_random_baseline(const GoldSet& gold, int repetitions, std::uint64_t seed);

}  // namespace lsc
