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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lsc/corpus.hpp"
#include "lsc/embedding.hpp"

namespace lsc {

enum class Task { graded, compare, binary, gain, loss };

std::string to_string(Task t);
Task parse_task(std::string_view s);
bool is_binary(Task t);

// Scores or labels per lemma. Words without a defined value are listed in
// `skipped` instead of being silently dropped.
struct PredictionSet {
  Task task = Task::graded;
  std::map<std::string, double> values;
  std::vector<std::string> skipped;

  PredictionSet relabeled(Task t) const {
    PredictionSet p = *this;
    p.task = t;
    return p;
  }
};

// Prediction TSV: provenance comment, then "lemma<TAB>value" rows; an empty
// value marks a skipped word.
void write_predictions(const PredictionSet& p, const std::filesystem::path& path, std::uint64_t seed);
PredictionSet read_predictions(const std::filesystem::path& path, Task task);

// 1 - cos(v1, v2) per target.
PredictionSet cosine_change_scores(const EmbeddingMatrix& aligned_c1, const EmbeddingMatrix& c2,
                                   const std::vector<std::string>& targets);

enum class FreqNormalization {
  log_ratio,         // log(freq) / log(total)
  per_log_total,     // freq / log(total)
};

template <typename Scalar>
Scalar normalized_frequency(Scalar freq, Scalar total, FreqNormalization norm) {
  using std::log;
  return norm == FreqNormalization::log_ratio ? log(freq) / log(total) : freq / log(total);
}

struct FrequencyChange {
  PredictionSet graded;                        // |x2 - x1|
  std::map<std::string, double> signed_change;  // x2 - x1
};

FrequencyChange freq_diff_scores(const VocabStats& stats1, const VocabStats& stats2,
                                 const std::vector<std::string>& targets,
                                 FreqNormalization norm = FreqNormalization::log_ratio);

// Among words labeled changed, a negative frequency change means loss and a
// positive one gain.
std::pair<PredictionSet, PredictionSet> frequency_gain_loss(const PredictionSet& binary,
                                                           const std::map<std::string, double>& signed_change);

enum class ProfileFeatures { morph_and_syntax, morph, syntax };

struct GrammaticalProfile {
  std::string lemma;
  Period period = Period::C1;
  std::map<std::string, std::int64_t> feature_counts;  // "Case=Nom", "deprel=nsubj"
};

std::map<std::string, GrammaticalProfile> grammatical_profiles(const Corpus& corpus,
                                                               const std::vector<std::string>& targets,
                                                               ProfileFeatures features = ProfileFeatures::morph_and_syntax);

// Cosine distance between raw-count profile vectors over the union feature space.
double profile_distance(const GrammaticalProfile& a, const GrammaticalProfile& b);

PredictionSet profile_change_scores(const Corpus& c1, const Corpus& c2, const std::vector<std::string>& targets,
                                    ProfileFeatures features = ProfileFeatures::morph_and_syntax);

// Label 1 iff score > mean + population std.
PredictionSet binarize_mean_std(const PredictionSet& graded);

// Two-segment least-squares split of the ascending scores; words scoring above
// the last score of the lower segment are labeled 1. Ties between split points
// go to the highest split, so equal scores label nothing.
PredictionSet binarize_changepoint(const PredictionSet& graded);

// Index (into the ascending-sorted scores) of the first element of the upper segment.
std::size_t changepoint_split(std::vector<double> sorted_scores);

PredictionSet minority_baseline(const std::vector<std::string>& targets, Task task);
PredictionSet random_baseline(const std::vector<std::string>& targets, Task task, std::uint64_t seed);

}  // namespace lsc
