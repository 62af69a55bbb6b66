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

#include "reaas/spectral.hpp"

#include <cmath>

#include "reaas/train.hpp"

namespace reaas {

std::pair<double, Vector> spectral_norm_power(
    const AffineLayer& layer, const std::optional<Vector>& state, int iters,
    std::uint64_t seed) {
  if (iters < 1) throw InvalidInput("spectral_norm_power: iters must be >= 1");
  const Eigen::Index n = layer.in_dim();
  Vector v;
  if (state && state->size() == n) {
    v = *state;
  } else {
    Rng rng(seed);
    v = gaussian_vector(rng, n, 1.0);
  }
  double vn = v.norm();
  if (vn == 0.0) v.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  else v /= vn;

  for (int it = 0; it < iters; ++it) {
    Vector next = layer.weight.transpose() * (layer.weight * v);
    const double norm = next.norm();
    if (norm == 0.0) return {0.0, v};  // zero matrix or v in the null space
    v = next / norm;
  }
  return {(layer.weight * v).norm(), v};
}

SpectralProfile spectral_profile(const AffineNetwork& net, int iters,
                                 bool include_last_layer, std::uint64_t seed) {
  SpectralProfile profile;
  const std::size_t count = include_last_layer ? net.depth() : net.depth() - 1;
  for (std::size_t j = 0; j < count; ++j) {
    auto [sigma, v] =
        spectral_norm_power(net.layer(j), std::nullopt, iters, seed + j);
    profile.per_layer_norms.push_back(sigma);
    profile.iteration_vectors.push_back(std::move(v));
    profile.product *= sigma;
  }
  return profile;
}

AffineNetwork pretrain_encoder(AffineNetwork encoder_with_head,
                               const LabeledDataset& data,
                               const SpectralConfig& cfg, int epochs, double lr,
                               int batch, std::uint64_t seed) {
  if (encoder_with_head.depth() < 2) {
    throw InvalidInput("pretrain_encoder: network must have a head layer");
  }
  TrainOptions opts;
  opts.epochs = epochs;
  opts.lr = lr;
  opts.batch = batch;
  opts.seed = seed;
  if (cfg.lambda > 0.0) opts.spectral = cfg;
  AffineNetwork trained =
      train_classifier(std::move(encoder_with_head), data, opts);
  return trained.without_head();
}

}  // namespace reaas
