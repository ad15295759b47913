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

#include <Eigen/Core>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "lsc/error.hpp"
#include "lsc/wug.hpp"

namespace lsc {

// Lower (k) and upper (n) sense-frequency thresholds for the binary notions.
struct KnThresholds {
  double k = 1.0;
  double n = 3.0;
};

// k = clamp(0.01 |U|, 1, 3), n = clamp(0.1 |U|, 3, 5); fractional values kept.
KnThresholds kn_thresholds(std::size_t usage_count);

namespace detail {

template <typename Scalar>
Scalar plogp_ratio(Scalar p, Scalar m) {
  return p > Scalar(0) ? p * std::log2(p / m) : Scalar(0);
}

template <typename Derived>
void check_distribution(const Eigen::MatrixBase<Derived>& p, const char* name) {
  using Scalar = typename Derived::Scalar;
  if ((p.array() < Scalar(0)).any() || !p.allFinite())
    throw PreconditionError(std::string(name) + " has negative or non-finite entries");
  if (std::abs(p.sum() - Scalar(1)) > Scalar(1e-9)) throw PreconditionError(std::string(name) + " does not sum to 1");
}

}  // namespace detail

// Jensen-Shannon distance (square root of the base-2 divergence) between two
// probability vectors; lies in [0, 1].
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar jsd_distance(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) throw PreconditionError("jsd_distance: length mismatch");
  detail::check_distribution(p, "p");
  detail::check_distribution(q, "q");
  Scalar div(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar m = Scalar(0.5) * (p(i) + q(i));
    div += Scalar(0.5) * (detail::plogp_ratio(p(i), m) + detail::plogp_ratio(Scalar(q(i)), m));
  }
  // Rounding can leave tiny negatives or values just above 1.
  return std::sqrt(std::clamp(div, Scalar(0), Scalar(1)));
}

template <typename Derived>
Eigen::VectorXd normalize_counts(const Eigen::MatrixBase<Derived>& counts) {
  Eigen::VectorXd v = counts.template cast<double>();
  const double total = v.sum();
  if (!(total > 0)) throw UndefinedError("cannot normalize an empty frequency distribution");
  return v / total;
}

double graded_change(const SenseFrequencyDistribution& d1, const SenseFrequencyDistribution& d2);

struct BinaryScores {
  int binary = 0;
  int gain = 0;
  int loss = 0;
};

enum class KnRounding { exact, nearest };

// gain: some cluster with D1[c] <= k and D2[c] >= n; loss: the reverse.
// `first` and `second` are the thresholds of the respective periods.
BinaryScores binary_scores(const Eigen::VectorXi& d1, const Eigen::VectorXi& d2, KnThresholds first,
                           KnThresholds second, KnRounding rounding = KnRounding::exact);

inline BinaryScores binary_scores(const Eigen::VectorXi& d1, const Eigen::VectorXi& d2, KnThresholds kn) {
  return binary_scores(d1, d2, kn, kn);
}

// Negated mean of median weights over edges joining C1 and C2 usages.
double compare_score(const WordUsageGraph& g);

struct ChangeScores {
  std::string lemma;
  std::optional<double> graded;
  std::optional<double> compare;  // negated COMPARE, in [-4, -1]
  std::optional<int> binary;
  std::optional<int> gain;
  std::optional<int> loss;
  KnThresholds kn_c1;
  KnThresholds kn_c2;
};

struct ChangeOptions {
  KnRounding rounding = KnRounding::exact;
};

// Undefined scores are left empty rather than set to 0.
ChangeScores derive_change_scores(const WordUsageGraph& g, const Clustering& c, const ChangeOptions& opts = {});

inline const std::vector<std::string> kGoldColumns = {"lemma", "change_graded", "change_binary", "gain", "loss",
                                                      "compare"};

void write_gold_scores(const std::map<std::string, ChangeScores>& scores, const std::filesystem::path& path,
                       std::uint64_t seed);
std::map<std::string, ChangeScores> read_gold_scores(const std::filesystem::path& path);

}  // namespace lsc
