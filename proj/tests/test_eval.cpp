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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "lsc/error.hpp"
#include "lsc/eval.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lsc;

namespace {

std::string name(int i) { return "w" + std::to_string(100 + i); }

GoldSet gold_60_28() {
  GoldSet g;
  for (int i = 0; i < 60; ++i) {
    auto& s = g.words[name(i)];
    s.lemma = name(i);
    s.graded = 0.01 * i;
    s.compare = -4.0 + 0.03 * i;
    s.binary = i < 28 ? 1 : 0;
    s.gain = i % 3 == 0 ? 1 : 0;
    s.loss = i % 4 == 0 ? 1 : 0;
  }
  return g;
}

void write_gold_as_submission(const GoldSet& g, const std::filesystem::path& dir) {
  for (const auto& [task, file] : kSubmissionFiles) {
    PredictionSet p;
    p.task = task;
    for (const auto& [w, s] : g.words) {
      std::optional<double> v;
      if (task == Task::graded) v = s.graded;
      if (task == Task::compare) v = s.compare;
      if (task == Task::binary && s.binary) v = *s.binary;
      if (task == Task::gain && s.gain) v = *s.gain;
      if (task == Task::loss && s.loss) v = *s.loss;
      if (v) p.values[w] = *v;
    }
    write_predictions(p, dir / file, 0);
  }
}

}  // namespace

TEST_CASE("Spearman examples") {
  const ScoreMap g = {{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}};
  CHECK(spearman(g, g) == doctest::Approx(1.0));
  CHECK(spearman(g, {{"a", 4}, {"b", 3}, {"c", 2}, {"d", 1}}) == doctest::Approx(-1.0));
  const ScoreMap p = {{"a", 1}, {"b", 2}, {"c", 2}, {"d", 4}};
  CHECK(spearman(g, p) == doctest::Approx(oracle::spearman({1, 2, 3, 4}, {1, 2, 2, 4})).epsilon(1e-12));
  CHECK_THROWS_AS(spearman(g, {{"a", 1}, {"b", 2}, {"c", 3}}), CoverageError);
  CHECK(spearman(g, {{"a", 1}, {"b", 2}, {"c", 3}}, Coverage::lenient) == doctest::Approx(1.0));
  CHECK_THROWS_AS(spearman({{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", 1}, {"b", 2}, {"c", 3}}), UndefinedError);
}

TEST_CASE("Spearman against the rank oracle, invariant under monotone maps") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> tie(0, 5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 25;
    ScoreMap g, p, q;
    std::vector<double> gv, pv;
    for (int i = 0; i < n; ++i) {
      const double a = trial % 2 ? tie(rng) : u(rng);
      const double b = trial % 3 ? tie(rng) : u(rng);
      g[name(i)] = a;
      p[name(i)] = b;
      q[name(i)] = std::exp(3 * b) - 7;
      gv.push_back(a);
      pv.push_back(b);
    }
    if (std::all_of(gv.begin(), gv.end(), [&](double v) { return v == gv[0]; })) continue;
    if (std::all_of(pv.begin(), pv.end(), [&](double v) { return v == pv[0]; })) continue;
    const double rho = spearman(g, p);
    CHECK(rho == doctest::Approx(oracle::spearman(gv, pv)).epsilon(1e-9));
    CHECK(spearman(g, q) == doctest::Approx(rho).epsilon(1e-12));
  }
}

TEST_CASE("binary metrics") {
  const auto gold = gold_60_28().labels(Task::binary);
  LabelMap ones, zeros;
  for (const auto& [w, v] : gold) {
    ones[w] = 1;
    zeros[w] = 0;
  }
  const auto m = binary_metrics(gold, ones);
  CHECK(m.precision == doctest::Approx(28.0 / 60.0));
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == doctest::Approx(0.636).epsilon(0.001 / 0.636));
  const auto perfect = binary_metrics(gold, gold);
  CHECK((perfect.f1 == 1.0 && perfect.precision == 1.0 && perfect.recall == 1.0));
  const auto none = binary_metrics(gold, zeros);
  CHECK((none.f1 == 0.0 && none.precision == 0.0 && none.recall == 0.0));
  CHECK_THROWS_AS(binary_metrics(zeros, ones), UndefinedError);
}

TEST_CASE("a submission equal to gold scores perfectly") {
  testutil::TempDir dir("eval");
  const auto g = gold_60_28();
  write_gold_as_submission(g, dir.path());
  const auto r1 = score_submission(g, dir.path(), Phase::one);
  REQUIRE(r1.results.size() == 2);
  for (const auto& r : r1.results) CHECK(*r.spearman == doctest::Approx(1.0));
  const auto r2 = score_submission(g, dir.path(), Phase::two);
  REQUIRE(r2.results.size() == 3);
  for (const auto& r : r2.results) CHECK(r.binary->f1 == doctest::Approx(1.0));
  CHECK(r2.coverage == 1.0);

  write_eval_report(r2, dir / "report.tsv", 0);
  CHECK(testutil::read_file(dir / "report.tsv").find("binary\tf1\t1\t60") != std::string::npos);
  CHECK(format_eval_table(r1).find("graded") != std::string::npos);
}

TEST_CASE("submission validity and coverage") {
  testutil::TempDir dir("eval");
  const auto g = gold_60_28();
  write_gold_as_submission(g, dir.path());
  std::filesystem::remove(dir / "binary.tsv");
  CHECK_THROWS_AS(score_submission(g, dir.path(), Phase::two), InvalidSubmissionError);
  CHECK_NOTHROW(score_submission(g, dir.path(), Phase::one));

  PredictionSet partial;
  partial.task = Task::graded;
  for (int i = 1; i < 60; ++i) partial.values[name(i)] = i;
  write_predictions(partial, dir / "graded.tsv", 0);
  try {
    score_submission(g, dir.path(), Phase::one);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(e.missing() == std::vector<std::string>{name(0)});
    CHECK(std::string(e.what()).find(name(0)) != std::string::npos);
  }
  const auto lenient = score_submission(g, dir.path(), Phase::one, Coverage::lenient);
  CHECK(lenient.coverage == doctest::Approx(59.0 / 60.0));
}

TEST_CASE("scores do not depend on row order") {
  testutil::TempDir a("eval"), b("eval");
  const auto g = gold_60_28();
  std::mt19937_64 rng(62);
  std::vector<std::pair<std::string, double>> rows;
  for (int i = 0; i < 60; ++i) rows.push_back({name(i), std::uniform_real_distribution<double>(0, 1)(rng)});
  auto write = [&](const std::filesystem::path& p) {
    std::string text;
    for (const auto& [w, v] : rows) text += w + "\t" + std::to_string(v) + "\n";
    testutil::write_file(p, text);
  };
  write(a / "graded.tsv");
  std::shuffle(rows.begin(), rows.end(), rng);
  write(b / "graded.tsv");
  CHECK(*score_submission(g, a.path(), Phase::one).results[0].spearman ==
        *score_submission(g, b.path(), Phase::one).results[0].spearman);
}

TEST_CASE("threshold sweep end points") {
  std::mt19937_64 rng(63);
  const auto g = gold_60_28();
  const auto labels = g.labels(Task::binary);
  LabelMap ones;
  for (const auto& [w, v] : labels) ones[w] = 1;
  const double minority = binary_metrics(labels, ones).f1;
  for (int trial = 0; trial < 50; ++trial) {
    ScoreMap pred;
    std::uniform_int_distribution<int> tie(0, 3);
    for (const auto& [w, v] : labels) pred[w] = tie(rng);
    const auto pct = default_percentiles();
    const auto curve = threshold_sweep(labels, pred, pct);
    REQUIRE(curve.size() == 21);
    CHECK(curve.front().percentile == 0.0);
    CHECK(curve.front().f1 == 0.0);
    CHECK(curve.back().percentile == 100.0);
    CHECK(curve.back().f1 == minority);
  }
}

TEST_CASE("threshold sweep labels the top share including ties") {
  const LabelMap gold = {{"a", 1}, {"b", 1}, {"c", 0}, {"d", 0}};
  const ScoreMap pred = {{"a", 0.9}, {"b", 0.8}, {"c", 0.8}, {"d", 0.1}};
  const std::vector<double> pct = {25, 50};
  const auto curve = threshold_sweep(gold, pred, pct);
  CHECK(curve[0].f1 == doctest::Approx(2.0 / 3.0));  // a only
  CHECK(curve[1].f1 == doctest::Approx(0.8));        // a, b and tied c
}

TEST_CASE("random baseline over repetitions") {
  const auto g = gold_60_28();
  const auto r = evaluate_random_baseline(g, 100, 7);
  CHECK(std::abs(r.mean_spearman) < 0.1);
  REQUIRE(r.mean_f1);
  CHECK(*r.mean_f1 > 0.2);
  CHECK(*r.mean_f1 < 0.7);
}
