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

#ifndef REAAS_CROWN_HPP
#define REAAS_CROWN_HPP

#include <vector>

#include "reaas/network.hpp"

namespace reaas {

/// Per-output linear bounding functions of the input, valid for every
/// perturbation with ||delta||_2 <= rho around the propagation center:
///   lower_coeffs.row(i) * x + lower_offset[i]
///     <= output_i(x) <=
///   upper_coeffs.row(i) * x + upper_offset[i].
struct BoundingLines {
  Matrix lower_coeffs;
  Vector lower_offset;
  Matrix upper_coeffs;
  Vector upper_offset;
};

/// Elementwise range of one hidden layer's pre-activations over the ball.
struct PreactivationInterval {
  Vector low;
  Vector high;
};

enum class Direction { Min, Max };

/// Exact extremum of coeffs.x + offset over the closed l2 ball of radius rho
/// around center: coeffs.center + offset +- rho * ||coeffs||_2.
double ball_extremum(const Vector& coeffs, double offset, const Vector& center,
                     double rho, Direction direction);

/// Linear bound propagation through ReLU layers. Stable neurons map exactly;
/// an unstable neuron with pre-activation range [l, u] is relaxed to the
/// upper chord u(z-l)/(u-l) and an adaptive lower line (slope 1 if u >= |l|,
/// else 0).
BoundingLines propagate_bounds(const AffineNetwork& net, const Vector& center,
                               double rho);

/// Intermediate ranges, one per hidden layer; exposed for diagnostics and
/// containment tests.
std::vector<PreactivationInterval> preactivation_intervals(
    const AffineNetwork& net, const Vector& center, double rho);

struct BcCertificate {
  int label = 0;
  double feature_radius = 0.0;
};

/// Certified radius of a classifier at a clean input: the largest r (binary
/// search to `precision` over [0, rho_high]) for which the lower bound on
/// every margin logit_y - logit_l stays positive over the ball.
BcCertificate bc_feature_radius(const AffineNetwork& classifier,
                                const Vector& v, double precision,
                                double rho_high = 10.0);

}  // namespace reaas

#endif  // REAAS_CROWN_HPP
