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

#include "lsc/agreement.hpp"

#include <cmath>
#include <set>

#include "lsc/error.hpp"
#include "lsc/stats.hpp"
#include "lsc/tsv.hpp"

namespace lsc {

std::vector<std::vector<int>> reliability_units(std::span<const Judgment> judgments) {
  std::map<UsagePair, std::vector<int>> units;
  for (const auto& j : judgments)
    if (j.value != 0) units[make_pair_key(j.usage1, j.usage2)].push_back(j.value);
  std::vector<std::vector<int>> out;
  out.reserve(units.size());
  for (auto& [k, v] : units) out.push_back(std::move(v));
  return out;
}

ValueCounts pairable_values(const std::vector<std::vector<int>>& units) {
  ValueCounts counts;
  for (const auto& u : units)
    if (u.size() >= 2)
      for (int v : u) counts[v] += 1.0;
  return counts;
}

namespace {

// Squared distance between two values under the metric and marginals.
class Metric {
 public:
  Metric(AlphaMetric kind, const ValueCounts& marginals) : kind_(kind), marginals_(marginals) {}

  double operator()(int c, int k) const {
    if (c == k) return 0.0;
    if (kind_ == AlphaMetric::interval) return static_cast<double>(c - k) * (c - k);
    const int lo = std::min(c, k), hi = std::max(c, k);
    double between = 0.0;
    for (auto it = marginals_.lower_bound(lo); it != marginals_.end() && it->first <= hi; ++it) between += it->second;
    const double half = 0.5 * (count(c) + count(k));
    return (between - half) * (between - half);
  }

 private:
  double count(int v) const {
    auto it = marginals_.find(v);
    return it == marginals_.end() ? 0.0 : it->second;
  }

  AlphaMetric kind_;
  const ValueCounts& marginals_;
};

}  // namespace

double krippendorff_alpha_units(const std::vector<std::vector<int>>& units, AlphaMetric metric,
                                const ValueCounts* pool) {
  const ValueCounts local = pairable_values(units);
  double n = 0.0;
  for (const auto& [v, c] : local) n += c;
  if (n < 2) throw UndefinedError("alpha undefined: no usage pair judged by two or more annotators");

  const ValueCounts& marginals = pool ? *pool : local;
  double n_exp = 0.0;
  for (const auto& [v, c] : marginals) n_exp += c;
  if (n_exp < 2) throw UndefinedError("alpha undefined: pooled value distribution is empty");
  const Metric delta(metric, marginals);

  // Observed disagreement: pairwise within units, each unit weighted 1/(m-1).
  double observed = 0.0;
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j) s += delta(u[i], u[j]);
    observed += s / static_cast<double>(u.size() - 1);
  }
  observed /= n;

  double expected = 0.0;
  for (const auto& [c, nc] : marginals)
    for (const auto& [k, nk] : marginals) expected += nc * nk * delta(c, k);
  expected /= n_exp * (n_exp - 1.0);
  if (expected <= 0.0) throw UndefinedError("alpha undefined: zero expected disagreement");
  return 1.0 - observed / expected;
}

double krippendorff_alpha(std::span<const Judgment> judgments, ExpectedFrom expected_from, AlphaMetric metric,
                          const ValueCounts* pool) {
  auto units = reliability_units(judgments);
  if (expected_from == ExpectedFrom::pooled) {
    if (!pool) throw PreconditionError("pooled alpha requires the global value distribution");
    return krippendorff_alpha_units(units, metric, pool);
  }
  return krippendorff_alpha_units(units, metric);
}

double pairwise_spearman_mean(std::span<const Judgment> judgments) {
  // annotator -> usage pair -> (sum, count)
  std::map<std::string, std::map<UsagePair, std::pair<double, int>>> by_annotator;
  for (const auto& j : judgments) {
    if (j.value == 0) continue;
    auto& cell = by_annotator[j.annotator][make_pair_key(j.usage1, j.usage2)];
    cell.first += j.value;
    cell.second += 1;
  }
  double weighted = 0.0;
  double weight = 0.0;
  for (auto a = by_annotator.begin(); a != by_annotator.end(); ++a) {
    for (auto b = std::next(a); b != by_annotator.end(); ++b) {
      std::vector<double> x, y;
      for (const auto& [pair, cell] : a->second) {
        auto it = b->second.find(pair);
        if (it == b->second.end()) continue;
        x.push_back(cell.first / cell.second);
        y.push_back(it->second.first / it->second.second);
      }
      if (x.size() < 2) continue;
      try {
        const double rho = spearman_rho(x, y);
        weighted += rho * static_cast<double>(x.size());
        weight += static_cast<double>(x.size());
      } catch (const UndefinedError&) {
      }
    }
  }
  if (weight == 0.0) throw UndefinedError("no annotator pair shares two or more non-constant judged usage pairs");
  return weighted / weight;
}

namespace {

template <class F>
std::optional<double> defined(F&& f) {
  try {
    return f();
  } catch (const UndefinedError&) {
    return std::nullopt;
  }
}

WordAgreement describe(std::span<const Judgment> judgments, AlphaMetric metric, const ValueCounts& pool) {
  WordAgreement w;
  std::set<std::string> annotators;
  std::set<UsagePair> pairs;
  for (const auto& j : judgments) {
    if (j.value == 0) continue;
    ++w.judgment_count;
    annotators.insert(j.annotator);
    pairs.insert(make_pair_key(j.usage1, j.usage2));
  }
  w.annotators = annotators.size();
  w.judged_pairs = pairs.size();
  w.alpha_local = defined([&] { return krippendorff_alpha(judgments, ExpectedFrom::local, metric); });
  w.alpha_pooled = defined([&] { return krippendorff_alpha(judgments, ExpectedFrom::pooled, metric, &pool); });
  w.spearman = defined([&] { return pairwise_spearman_mean(judgments); });
  return w;
}

}  // namespace

AgreementReport agreement_report(std::span<const Judgment> judgments, AlphaMetric metric) {
  const ValueCounts pool = pairable_values(reliability_units(judgments));
  std::map<std::string, std::vector<Judgment>> by_word;
  for (const auto& j : judgments) {
    if (j.lemma.empty()) throw PreconditionError("agreement_report: judgment without lemma");
    by_word[j.lemma].push_back(j);
  }
  AgreementReport r;
  for (const auto& [lemma, js] : by_word) r.per_word[lemma] = describe(js, metric, pool);
  r.global = describe(judgments, metric, pool);
  return r;
}

AgreementFilter filter_words_by_agreement(const AgreementReport& report, double threshold) {
  AgreementFilter f;
  for (const auto& [lemma, w] : report.per_word) {
    bool discard;
    if (!w.alpha_local && !w.alpha_pooled)
      discard = true;
    else if (!w.alpha_local || !w.alpha_pooled)
      discard = false;
    else
      discard = *w.alpha_local < threshold && *w.alpha_pooled < threshold;
    (discard ? f.discarded : f.kept).push_back(lemma);
  }
  return f;
}

OverviewRow overview_row(const std::string& label, const std::vector<std::string>& words,
                         std::span<const Judgment> judgments, const std::map<std::string, WordOverview>& info,
                         AlphaMetric metric) {
  OverviewRow row;
  row.label = label;
  row.n = words.size();
  const std::set<std::string> wanted(words.begin(), words.end());
  std::vector<Judgment> subset;
  for (const auto& j : judgments)
    if (wanted.count(j.lemma)) subset.push_back(j);

  auto mean_of = [&](auto getter) -> std::optional<double> {
    double s = 0.0;
    std::size_t k = 0;
    for (const auto& w : words) {
      auto it = info.find(w);
      if (it == info.end()) continue;
      if (auto v = getter(it->second)) {
        s += static_cast<double>(*v);
        ++k;
      }
    }
    return k ? std::optional<double>(s / static_cast<double>(k)) : std::nullopt;
  };
  for (const auto& w : words) {
    auto it = info.find(w);
    if (it == info.end()) continue;
    const auto& pos = it->second.pos;
    if (pos == "NOUN" || pos == "nn" || pos == "N") ++row.nouns;
    else if (pos == "VERB" || pos == "vb" || pos == "V") ++row.verbs;
    else if (!pos.empty()) ++row.adj_adv;
  }
  row.avg_usages = mean_of([](const WordOverview& o) -> std::optional<double> {
    return o.usages ? std::optional<double>(static_cast<double>(o.usages)) : std::nullopt;
  });
  row.unc = mean_of([](const WordOverview& o) -> std::optional<double> {
    return o.uncompared ? std::optional<double>(static_cast<double>(*o.uncompared)) : std::nullopt;
  });
  row.loss_x10 = mean_of([](const WordOverview& o) -> std::optional<double> {
    return o.normalized_loss ? std::optional<double>(*o.normalized_loss * 10.0) : std::nullopt;
  });
  row.lsc_b = mean_of([](const WordOverview& o) -> std::optional<double> {
    return o.binary ? std::optional<double>(*o.binary) : std::nullopt;
  });
  row.lsc_g = mean_of([](const WordOverview& o) { return o.graded; });

  std::set<std::string> annotators;
  std::set<UsagePair> pairs;
  std::size_t nonzero = 0;
  for (const auto& j : subset) {
    if (j.value == 0) continue;
    ++nonzero;
    annotators.insert(j.annotator);
    pairs.insert(make_pair_key(j.usage1, j.usage2));
  }
  row.annotators = annotators.size();
  row.judged_pairs = pairs.size();
  if (!pairs.empty()) row.avg_judgments = static_cast<double>(nonzero) / static_cast<double>(pairs.size());
  row.kri = defined([&] { return krippendorff_alpha(subset, ExpectedFrom::local, metric); });
  row.spr = defined([&] { return pairwise_spearman_mean(subset); });
  return row;
}

void write_agreement_report(const AgreementReport& report, const std::vector<OverviewRow>& overview,
                            const std::filesystem::path& path, std::uint64_t seed) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  TsvWriter w(path, seed,
              {"row", "n", "N/V/A", "|U|", "AN", "JUD", "AV", "KRI", "SPR", "UNC", "LOSS", "LSC_B", "LSC_G",
               "KRI_pooled"});
  for (const auto& r : overview) {
    std::optional<double> pooled;
    if (auto it = report.per_word.find(r.label); it != report.per_word.end())
      pooled = it->second.alpha_pooled;
    else if (r.label == "full")
      pooled = report.global.alpha_pooled;
    w.row({r.label, std::to_string(r.n),
           std::to_string(r.nouns) + "/" + std::to_string(r.verbs) + "/" + std::to_string(r.adj_adv),
           fmt(r.avg_usages), std::to_string(r.annotators), std::to_string(r.judged_pairs), fmt(r.avg_judgments),
           fmt(r.kri), fmt(r.spr), fmt(r.unc), fmt(r.loss_x10), fmt(r.lsc_b), fmt(r.lsc_g), fmt(pooled)});
  }
}

}  // namespace lsc
