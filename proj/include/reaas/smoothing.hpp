// Copyright 2026 The REaaS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REAAS_SMOOTHING_HPP
#define REAAS_SMOOTHING_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "reaas/common.hpp"

namespace reaas {

struct SmoothingConfig {
  std::int64_t n_samples = 100000;
  double sigma = 0.5;
  double alpha = 0.001;
  std::uint64_t seed = 0;
};

/// Outcome of one randomized-smoothing certification. `radius` is present
/// only when p_lower > 1/2; otherwise the certification abstains but the
/// frequencies are still reported.
struct SmoothingEvidence {
  std::map<int, std::int64_t> label_frequencies;
  int predicted = 0;
  double p_lower = 0.0;
  std::optional<double> radius;

  bool abstained() const { return !radius.has_value(); }
};

/// One-sided Clopper-Pearson lower confidence bound: the alpha-quantile of
/// Beta(successes, total - successes + 1); 0 when successes = 0.
double clopper_pearson_lower(std::int64_t successes, std::int64_t total,
                             double alpha);

/// Regularized incomplete beta function I_x(a, b) (continued-fraction
/// evaluation); exposed because the quantile inversion and its tests share it.
double regularized_incomplete_beta(double a, double b, double x);

double std_normal_cdf(double z);

/// Inverse standard normal CDF, absolute error below 1e-8 on (0, 1).
double std_normal_quantile(double p);

using Predictor = std::function<int(const Vector&)>;

/// Draws cfg.n_samples Gaussian noise vectors from a counter-based stream
/// (sample j's noise depends only on (seed, j), so any evaluation order gives
/// identical results), tallies predicted labels, and certifies the majority
/// label via the Clopper-Pearson bound. Ties break toward the smaller label.
SmoothingEvidence certify_smoothed(const Predictor& predict, const Vector& x,
                                   const SmoothingConfig& cfg);

}  // namespace reaas

#endif  // REAAS_SMOOTHING_HPP
