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

#ifndef REAAS_F2I_HPP
#define REAAS_F2I_HPP

#include "reaas/crown.hpp"
#include "reaas/network.hpp"

namespace reaas {

/// Binary-search bracket and precision for the feature-to-input conversion.
struct SearchConfig {
  double rho_low_init = 0.0;
  double rho_high_init = 10.0;
  double beta = 0.001;
};

/// Per-coordinate feature movement bounds over an input ball, and the derived
/// upper bound rf_prime = sqrt(sum max(L_i^2, U_i^2)) on the l2 feature
/// distance.
struct FeatureDistanceBound {
  Vector per_dim_low;   // L_i <= 0
  Vector per_dim_high;  // U_i >= 0
  double rf_prime = 0.0;
};

FeatureDistanceBound feature_distance_upper_bound(const AffineNetwork& encoder,
                                                  const Vector& x, double rho);

struct F2IResult {
  double radius = 0.0;
  int rounds = 0;
  // True when no bisection midpoint ever satisfied the constraint, i.e. the
  // encoder is too sensitive to certify anything above rho_low_init.
  bool at_floor = false;
};

/// Converts a feature-space certified radius to the largest certifiable
/// input-space radius by bisection: the midpoint passes when rf_prime < R_F
/// (an exact tie counts as a violation), and the final lower bracket is the
/// answer. Sound: every ||delta||_2 < radius keeps the feature distance
/// below R_F.
F2IResult f2i_search(const AffineNetwork& encoder, const Vector& x, double R_F,
                     const SearchConfig& cfg = {});

inline double f2i_radius(const AffineNetwork& encoder, const Vector& x,
                         double R_F, const SearchConfig& cfg = {}) {
  return f2i_search(encoder, x, R_F, cfg).radius;
}

}  // namespace reaas

#endif  // REAAS_F2I_HPP
