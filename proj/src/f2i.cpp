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

#include "reaas/f2i.hpp"

#include <cmath>

namespace reaas {

FeatureDistanceBound feature_distance_upper_bound(const AffineNetwork& encoder,
                                                  const Vector& x, double rho) {
  const Vector clean = encoder.forward(x);
  const BoundingLines lines = propagate_bounds(encoder, x, rho);
  const Eigen::Index d = clean.size();
  FeatureDistanceBound bound;
  bound.per_dim_low = Vector(d);
  bound.per_dim_high = Vector(d);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lo = ball_extremum(lines.lower_coeffs.row(i).transpose(),
                                    lines.lower_offset[i], x, rho,
                                    Direction::Min) -
                      clean[i];
    const double hi = ball_extremum(lines.upper_coeffs.row(i).transpose(),
                                    lines.upper_offset[i], x, rho,
                                    Direction::Max) -
                      clean[i];
    bound.per_dim_low[i] = lo;
    bound.per_dim_high[i] = hi;
    sum += std::max(lo * lo, hi * hi);
  }
  bound.rf_prime = std::sqrt(sum);
  return bound;
}

F2IResult f2i_search(const AffineNetwork& encoder, const Vector& x, double R_F,
                     const SearchConfig& cfg) {
  if (R_F <= 0.0) throw InvalidInput("f2i: feature radius must be > 0");
  if (cfg.beta <= 0.0 || cfg.rho_low_init < 0.0 ||
      cfg.rho_low_init >= cfg.rho_high_init) {
    throw InvalidInput("f2i: invalid search configuration");
  }
  F2IResult result;
  double lo = cfg.rho_low_init;
  double hi = cfg.rho_high_init;
  bool moved = false;
  while (hi - lo > cfg.beta) {
    const double mid = 0.5 * (lo + hi);
    const double rf_prime = feature_distance_upper_bound(encoder, x, mid).rf_prime;
    if (rf_prime < R_F) {
      lo = mid;
      moved = true;
    } else {
      hi = mid;
    }
    ++result.rounds;
  }
  result.radius = lo;
  result.at_floor = !moved;
  return result;
}

}  // namespace reaas
