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

#include "lsc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lsc/error.hpp"
#include "lsc/stats.hpp"
#include "lsc/text.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

std::string to_string(Task t) {
  switch (t) {
    case Task::graded: return "graded";
    case Task::compare: return "compare";
    case Task::binary: return "binary";
    case Task::gain: return "gain";
    case Task::loss: return "loss";
  }
  return "?";
}

Task parse_task(std::string_view s) {
  for (Task t : {Task::graded, Task::compare, Task::binary, Task::gain, Task::loss})
    if (to_string(t) == s) return t;
  throw FormatError("unknown task '" + std::string(s) + "'");
}

bool is_binary(Task t) { return t == Task::binary || t == Task::gain || t == Task::loss; }

void write_predictions(const PredictionSet& p, const std::filesystem::path& path, std::uint64_t seed) {
  TsvWriter w(path, seed, {}, {{"task", to_string(p.task)}});
  std::map<std::string, std::string> rows;
  for (const auto& [lemma, v] : p.values) rows[lemma] = is_binary(p.task) ? std::to_string(static_cast<int>(v)) : format_double(v);
  for (const auto& lemma : p.skipped) rows.emplace(lemma, "");
  for (const auto& [lemma, v] : rows) w.row({lemma, v});
}

PredictionSet read_predictions(const std::filesystem::path& path, Task task) {
  PredictionSet p;
  p.task = task;
  const std::string src = path.string();
  std::set<std::string> seen;
  for (const auto& row : read_raw_rows(path)) {
    if (row.fields.size() < 2 && !(row.fields.size() == 1 && !row.fields[0].empty()))
      throw ParseError(src, row.line, "expected lemma<TAB>value");
    const std::string lemma = normalize_lemma(trim(row.fields[0]));
    if (!seen.insert(lemma).second) throw ParseError(src, row.line, "duplicate lemma '" + lemma + "'");
    if (row.fields.size() > 2) throw ParseError(src, row.line, "expected exactly two fields");
    auto v = row.fields.size() == 2 ? parse_optional(row.fields[1], src, row.line) : std::nullopt;
    if (!v) {
      p.skipped.push_back(lemma);
      continue;
    }
    if (is_binary(task) && *v != 0.0 && *v != 1.0)
      throw FormatError(src + ":" + std::to_string(row.line) + ": binary prediction must be 0 or 1");
    p.values[lemma] = *v;
  }
  return p;
}

PredictionSet cosine_change_scores(const EmbeddingMatrix& aligned_c1, const EmbeddingMatrix& c2,
                                   const std::vector<std::string>& targets) {
  PredictionSet p;
  p.task = Task::graded;
  for (const auto& w : targets) {
    auto a = aligned_c1.row_of(w);
    auto b = c2.row_of(w);
    if (!a || !b) {
      p.skipped.push_back(w);
      continue;
    }
    const Eigen::VectorXd x = aligned_c1.vectors.row(*a).cast<double>();
    const Eigen::VectorXd y = c2.vectors.row(*b).cast<double>();
    const double denom = x.norm() * y.norm();
    if (!(denom > 0)) {
      p.skipped.push_back(w);
      continue;
    }
    p.values[w] = 1.0 - std::clamp(x.dot(y) / denom, -1.0, 1.0);
  }
  return p;
}

FrequencyChange freq_diff_scores(const VocabStats& stats1, const VocabStats& stats2,
                                 const std::vector<std::string>& targets, FreqNormalization norm) {
  if (stats1.total_tokens < 2 || stats2.total_tokens < 2)
    throw PreconditionError("frequency baseline needs corpora with at least two tokens");
  auto normalized = [norm](std::int64_t f, std::int64_t total) {
    return normalized_frequency(static_cast<double>(f), static_cast<double>(total), norm);
  };
  FrequencyChange out;
  out.graded.task = Task::graded;
  for (const auto& w : targets) {
    auto a = stats1.lemma_freq.find(w);
    auto b = stats2.lemma_freq.find(w);
    if (a == stats1.lemma_freq.end() || b == stats2.lemma_freq.end() || a->second <= 0 || b->second <= 0) {
      out.graded.skipped.push_back(w);
      continue;
    }
    const double d = normalized(b->second, stats2.total_tokens) - normalized(a->second, stats1.total_tokens);
    out.graded.values[w] = std::abs(d);
    out.signed_change[w] = d;
  }
  return out;
}

std::pair<PredictionSet, PredictionSet> frequency_gain_loss(const PredictionSet& binary,
                                                           const std::map<std::string, double>& signed_change) {
  PredictionSet gain{Task::gain, {}, binary.skipped};
  PredictionSet loss{Task::loss, {}, binary.skipped};
  for (const auto& [w, label] : binary.values) {
    auto it = signed_change.find(w);
    if (it == signed_change.end()) {
      gain.skipped.push_back(w);
      loss.skipped.push_back(w);
      continue;
    }
    const bool changed = label == 1.0;
    loss.values[w] = changed && it->second < 0 ? 1.0 : 0.0;
    gain.values[w] = changed && it->second >= 0 ? 1.0 : 0.0;
  }
  return {gain, loss};
}

std::map<std::string, GrammaticalProfile> grammatical_profiles(const Corpus& corpus,
                                                               const std::vector<std::string>& targets,
                                                               ProfileFeatures features) {
  if (!corpus.has(Layer::conllu)) throw PreconditionError("grammatical profiles require the CoNLL-U layer");
  std::map<std::string, GrammaticalProfile> out;
  const std::set<std::string> wanted(targets.begin(), targets.end());
  std::unordered_map<std::string, std::string> cache;
  for (const auto& s : corpus.sentences()) {
    for (const auto& t : s.tokens) {
      auto it = cache.find(t.lemma);
      if (it == cache.end()) it = cache.emplace(t.lemma, normalize_lemma(t.lemma)).first;
      if (!wanted.count(it->second)) continue;
      auto& prof = out[it->second];
      prof.lemma = it->second;
      prof.period = corpus.period();
      if (features != ProfileFeatures::syntax)
        for (const auto& [k, v] : t.morph) ++prof.feature_counts[k + "=" + v];
      if (features != ProfileFeatures::morph && !t.deprel.empty()) ++prof.feature_counts["deprel=" + t.deprel];
    }
  }
  return out;
}

double profile_distance(const GrammaticalProfile& a, const GrammaticalProfile& b) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a.feature_counts) keys.insert(k);
  for (const auto& [k, v] : b.feature_counts) keys.insert(k);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(keys.size()));
  Eigen::VectorXd y = x;
  Eigen::Index i = 0;
  for (const auto& k : keys) {
    if (auto it = a.feature_counts.find(k); it != a.feature_counts.end()) x(i) = static_cast<double>(it->second);
    if (auto it = b.feature_counts.find(k); it != b.feature_counts.end()) y(i) = static_cast<double>(it->second);
    ++i;
  }
  const double denom = x.norm() * y.norm();
  if (!(denom > 0)) throw UndefinedError("profile distance undefined for an empty profile");
  return 1.0 - std::clamp(x.dot(y) / denom, -1.0, 1.0);
}

PredictionSet profile_change_scores(const Corpus& c1, const Corpus& c2, const std::vector<std::string>& targets,
                                    ProfileFeatures features) {
  auto p1 = grammatical_profiles(c1, targets, features);
  auto p2 = grammatical_profiles(c2, targets, features);
  PredictionSet p;
  p.task = Task::graded;
  for (const auto& w : targets) {
    auto a = p1.find(w);
    auto b = p2.find(w);
    if (a == p1.end() || b == p2.end() || a->second.feature_counts.empty() || b->second.feature_counts.empty()) {
      p.skipped.push_back(w);
      continue;
    }
    p.values[w] = profile_distance(a->second, b->second);
  }
  return p;
}

PredictionSet binarize_mean_std(const PredictionSet& graded) {
  if (graded.values.size() < 2) throw PreconditionError("mean+std binarization needs at least two scores");
  std::vector<double> scores;
  for (const auto& [w, v] : graded.values) scores.push_back(v);
  const auto [mean, sd] = mean_std(scores);
  const double threshold = mean + sd;
  PredictionSet out{Task::binary, {}, graded.skipped};
  for (const auto& [w, v] : graded.values) out.values[w] = v > threshold ? 1.0 : 0.0;
  return out;
}

std::size_t changepoint_split(std::vector<double> s) {
  const std::size_t n = s.size();
  if (n < 3) throw PreconditionError("change-point binarization needs at least three scores");
  std::sort(s.begin(), s.end());
  // Prefix sums for O(1) segment SSE.
  std::vector<double> sum(n + 1, 0.0), sq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + s[i];
    sq[i + 1] = sq[i] + s[i] * s[i];
  }
  auto sse = [&](std::size_t a, std::size_t b) {  // [a, b)
    const double m = static_cast<double>(b - a);
    const double t = sum[b] - sum[a];
    return std::max(0.0, (sq[b] - sq[a]) - t * t / m);
  };
  double scale = 0.0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * std::max(1.0, scale * scale * static_cast<double>(n));
  std::size_t best = 1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t split = 1; split < n; ++split) {
    const double cost = sse(0, split) + sse(split, n);
    if (cost <= best_cost + tol) {
      if (cost < best_cost - tol || split > best) best = split;
      best_cost = std::min(best_cost, cost);
    }
  }
  return best;
}

PredictionSet binarize_changepoint(const PredictionSet& graded) {
  std::vector<double> scores;
  for (const auto& [w, v] : graded.values) scores.push_back(v);
  const std::size_t split = changepoint_split(scores);
  std::sort(scores.begin(), scores.end());
  // Words tied with the top of the lower segment stay unchanged.
  const double floor = scores[split - 1];
  PredictionSet out{Task::binary, {}, graded.skipped};
  for (const auto& [w, v] : graded.values) out.values[w] = v > floor ? 1.0 : 0.0;
  return out;
}

PredictionSet minority_baseline(const std::vector<std::string>& targets, Task task) {
  if (!is_binary(task)) throw PreconditionError("the minority baseline only applies to binary subtasks");
  PredictionSet p;
  p.task = task;
  for (const auto& w : targets) p.values[w] = 1.0;
  return p;
}

PredictionSet random_baseline(const std::vector<std::string>& targets, Task task, std::uint64_t seed) {
  PredictionSet p;
  p.task = task;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& w : targets) {
    const double u = unif(rng);
    p.values[w] = is_binary(task) ? (u < 0.5 ? 0.0 : 1.0) : u;
  }
  return p;
}

}  // namespace lsc
