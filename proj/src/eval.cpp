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

#include "lsc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lsc/error.hpp"
#include "lsc/stats.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

namespace {

template <class GoldMap, class PredMap>
std::vector<std::string> common_words(const GoldMap& gold, const PredMap& pred, Coverage coverage) {
  std::vector<std::string> words;
  std::vector<std::string> missing;
  for (const auto& [w, v] : gold) {
    if (pred.count(w))
      words.push_back(w);
    else
      missing.push_back(w);
  }
  if (!missing.empty() && coverage == Coverage::strict) throw CoverageError(std::move(missing));
  return words;
}

}  // namespace

double spearman(const ScoreMap& gold, const ScoreMap& pred, Coverage coverage) {
  const auto words = common_words(gold, pred, coverage);
  if (words.size() < 3) throw UndefinedError("spearman needs at least 3 common words");
  std::vector<double> g, p;
  for (const auto& w : words) {
    g.push_back(gold.at(w));
    p.push_back(pred.at(w));
  }
  if (std::all_of(g.begin(), g.end(), [&](double v) { return v == g.front(); }))
    throw UndefinedError("spearman undefined: gold scores are constant");
  return spearman_rho(g, p);
}

BinaryMetrics binary_metrics(const LabelMap& gold, const LabelMap& pred, Coverage coverage) {
  const auto words = common_words(gold, pred, coverage);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& w : words) {
    const int g = gold.at(w);
    const int p = pred.at(w);
    if ((g != 0 && g != 1) || (p != 0 && p != 1)) throw FormatError("binary label for '" + w + "' is not 0 or 1");
    if (p == 1 && g == 1) ++tp;
    if (p == 1 && g == 0) ++fp;
    if (p == 0 && g == 1) ++fn;
  }
  if (tp + fn == 0) throw UndefinedError("recall undefined: gold has no positive labels");
  BinaryMetrics m;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

ScoreMap GoldSet::graded() const {
  ScoreMap m;
  for (const auto& [w, s] : words)
    if (s.graded) m[w] = *s.graded;
  return m;
}

ScoreMap GoldSet::compare() const {
  ScoreMap m;
  for (const auto& [w, s] : words)
    if (s.compare) m[w] = *s.compare;
  return m;
}

LabelMap GoldSet::labels(Task task) const {
  LabelMap m;
  for (const auto& [w, s] : words) {
    const auto& v = task == Task::binary ? s.binary : task == Task::gain ? s.gain : s.loss;
    if (v) m[w] = *v;
  }
  return m;
}

GoldSet read_gold_set(const std::filesystem::path& path, Split split) {
  GoldSet g;
  g.split = split;
  g.words = read_gold_scores(path);
  return g;
}

namespace {

LabelMap to_labels(const PredictionSet& p) {
  LabelMap m;
  for (const auto& [w, v] : p.values) m[w] = static_cast<int>(v);
  return m;
}

}  // namespace

EvalReport score_submission(const GoldSet& gold, const std::filesystem::path& submission_dir, Phase phase,
                            Coverage coverage) {
  if (!std::filesystem::is_directory(submission_dir))
    throw InvalidSubmissionError("submission directory not found: " + submission_dir.string());
  EvalReport report;
  report.phase = phase;
  const Task obligatory = phase == Phase::one ? Task::graded : Task::binary;
  std::map<Task, PredictionSet> found;
  for (const auto& [task, file] : kSubmissionFiles) {
    const auto path = submission_dir / file;
    if (!std::filesystem::exists(path)) continue;
    found[task] = read_predictions(path, task);
    report.files_found.push_back(file);
  }
  if (!found.count(obligatory))
    throw InvalidSubmissionError("invalid submission: obligatory file " + kSubmissionFiles.at(obligatory) +
                                 " missing for phase " + std::to_string(static_cast<int>(phase)));

  {
    const auto& obl = found.at(obligatory);
    std::size_t present = 0;
    for (const auto& [w, s] : gold.words) present += obl.values.count(w);
    report.coverage = gold.words.empty() ? 0.0 : static_cast<double>(present) / static_cast<double>(gold.words.size());
  }

  const std::vector<Task> tasks = phase == Phase::one ? std::vector<Task>{Task::graded, Task::compare}
                                                      : std::vector<Task>{Task::binary, Task::gain, Task::loss};
  for (Task task : tasks) {
    auto it = found.find(task);
    if (it == found.end()) continue;
    SubtaskResult r;
    r.task = task;
    try {
      if (is_binary(task)) {
        const auto g = gold.labels(task);
        r.binary = binary_metrics(g, to_labels(it->second), coverage);
        r.scored_words = g.size();
      } else {
        const auto g = task == Task::graded ? gold.graded() : gold.compare();
        r.spearman = spearman(g, it->second.values, coverage);
        r.scored_words = g.size();
      }
    } catch (const UndefinedError& e) {
      if (task == obligatory) throw;
      r.note = e.what();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

void write_eval_report(const EvalReport& report, const std::filesystem::path& path, std::uint64_t seed) {
  TsvWriter w(path, seed, {"phase", "subtask", "metric", "value", "words"},
              {{"coverage", format_double(report.coverage)}});
  const std::string phase = std::to_string(static_cast<int>(report.phase));
  for (const auto& r : report.results) {
    const std::string n = std::to_string(r.scored_words);
    if (r.spearman) w.row({phase, to_string(r.task), "spearman", format_double(*r.spearman), n});
    if (r.binary) {
      w.row({phase, to_string(r.task), "f1", format_double(r.binary->f1), n});
      w.row({phase, to_string(r.task), "precision", format_double(r.binary->precision), n});
      w.row({phase, to_string(r.task), "recall", format_double(r.binary->recall), n});
    }
    if (!r.spearman && !r.binary) w.row({phase, to_string(r.task), "undefined", "", n});
  }
}

std::string format_eval_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[128];
  out << "Phase " << static_cast<int>(report.phase) << " (files: ";
  for (std::size_t i = 0; i < report.files_found.size(); ++i) out << (i ? ", " : "") << report.files_found[i];
  out << "; coverage " << report.coverage << ")\n";
  if (report.phase == Phase::one) {
    std::snprintf(buf, sizeof buf, "%-10s %10s\n", "subtask", "spearman");
    out << buf;
    for (const auto& r : report.results) {
      if (r.spearman)
        std::snprintf(buf, sizeof buf, "%-10s %10.3f\n", to_string(r.task).c_str(), *r.spearman);
      else
        std::snprintf(buf, sizeof buf, "%-10s %10s\n", to_string(r.task).c_str(), "n/a");
      out << buf;
    }
  } else {
    std::snprintf(buf, sizeof buf, "%-10s %8s %10s %8s\n", "subtask", "F1", "precision", "recall");
    out << buf;
    for (const auto& r : report.results) {
      if (r.binary)
        std::snprintf(buf, sizeof buf, "%-10s %8.3f %10.3f %8.3f\n", to_string(r.task).c_str(), r.binary->f1,
                      r.binary->precision, r.binary->recall);
      else
        std::snprintf(buf, sizeof buf, "%-10s %8s %10s %8s\n", to_string(r.task).c_str(), "n/a", "n/a", "n/a");
      out << buf;
    }
  }
  return out.str();
}

std::vector<SweepPoint> threshold_sweep(const LabelMap& gold, const ScoreMap& pred, std::span<const double> percentiles,
                                        Coverage coverage) {
  const auto words = common_words(gold, pred, coverage);
  std::vector<double> sorted;
  for (const auto& w : words) sorted.push_back(pred.at(w));
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double n = static_cast<double>(sorted.size());
  LabelMap g;
  for (const auto& w : words) g[w] = gold.at(w);

  std::vector<SweepPoint> curve;
  for (double p : percentiles) {
    if (p < 0 || p > 100) throw PreconditionError("percentile outside [0, 100]");
    const auto count = static_cast<std::size_t>(std::ceil(p * n / 100.0 - 1e-9));
    LabelMap labels;
    for (const auto& w : words) {
      const bool on = count > 0 && pred.at(w) >= sorted[std::min(count, sorted.size()) - 1];
      labels[w] = on ? 1 : 0;
    }
    curve.push_back({p, binary_metrics(g, labels, Coverage::strict).f1});
  }
  return curve;
}

std::vector<double> default_percentiles() {
  std::vector<double> p;
  for (int i = 0; i <= 100; i += 5) p.push_back(i);
  return p;
}

RandomBaselineResult evaluate_random_baseline(const GoldSet& gold, int repetitions, std::uint64_t seed) {
  if (repetitions < 1) throw PreconditionError("repetitions must be positive");
  std::vector<std::string> words;
  for (const auto& [w, s] : gold.words) words.push_back(w);
  const auto graded = gold.graded();
  const auto labels = gold.labels(Task::binary);
  RandomBaselineResult r;
  double f1_sum = 0.0;
  bool f1_defined = !labels.empty();
  for (int i = 0; i < repetitions; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i) * 2654435761ULL;
    r.mean_spearman += spearman(graded, random_baseline(words, Task::graded, s).values, Coverage::lenient);
    if (f1_defined) {
      try {
        f1_sum += binary_metrics(labels, to_labels(random_baseline(words, Task::binary, s + 1)), Coverage::lenient).f1;
      } catch (const UndefinedError&) {
        f1_defined = false;
      }
    }
  }
  r.mean_spearman /= repetitions;
  if (f1_defined) r.mean_f1 = f1_sum / repetitions;
  return r;
}

}  // namespace lsc
