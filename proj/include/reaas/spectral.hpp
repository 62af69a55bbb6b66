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

#ifndef REAAS_SPECTRAL_HPP
#define REAAS_SPECTRAL_HPP

#include <optional>
#include <vector>

#include "reaas/dataset.hpp"
#include "reaas/network.hpp"

namespace reaas {

struct SpectralConfig {
  double lambda = 0.00075;
  int power_iters = 10;
};

/// Per-layer spectral norms and their product (Lipschitz upper bound of the
/// affine stack; ReLU contributes factor 1 and is excluded).
struct SpectralProfile {
  std::vector<double> per_layer_norms;
  double product = 1.0;
  std::vector<Vector> iteration_vectors;
};

/// One power-method estimate: v <- normalize(W^T W v) for `iters` rounds from
/// `state` (or a seeded random unit vector), returning ||W v|| and the updated
/// state. Approaches the largest singular value from below.
std::pair<double, Vector> spectral_norm_power(
    const AffineLayer& layer, const std::optional<Vector>& state, int iters,
    std::uint64_t seed = 0);

/// Power-method profile of a network's layers (optionally skipping the head).
SpectralProfile spectral_profile(const AffineNetwork& net, int iters,
                                 bool include_last_layer,
                                 std::uint64_t seed = 0);

/// Trains encoder+head on cross-entropy plus lambda * product of per-layer
/// spectral norms of the non-head layers, then returns the encoder with the
/// head removed.
AffineNetwork pretrain_encoder(AffineNetwork encoder_with_head,
                               const LabeledDataset& data,
                               const SpectralConfig& cfg, int epochs, double lr,
                               int batch, std::uint64_t seed = 0);

}  // namespace reaas

#endif  // REAAS_SPECTRAL_HPP
