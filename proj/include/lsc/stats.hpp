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
#include <span>

namespace lsc {

// Fractional ranks (1-based); tied values share the mean of their positions.
Eigen::VectorXd average_ranks(std::span<const double> values);

// Throws UndefinedError when either side has zero variance.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Pearson correlation of average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Population mean and standard deviation.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

}  // namespace lsc
