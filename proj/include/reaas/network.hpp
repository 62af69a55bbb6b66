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

#ifndef REAAS_NETWORK_HPP
#define REAAS_NETWORK_HPP

#include <string>
#include <vector>

#include "reaas/common.hpp"

namespace reaas {

/// One affine map y = W x + b.
struct AffineLayer {
  Matrix weight;  // out_dim x in_dim
  Vector bias;    // out_dim

  Eigen::Index in_dim() const { return weight.cols(); }
  Eigen::Index out_dim() const { return weight.rows(); }
};

/// Feed-forward network: affine layers with ReLU between consecutive layers
/// and no activation after the last one. Immutable once built; forward() is
/// safe to call concurrently.
class AffineNetwork {
 public:
  AffineNetwork() = default;
  explicit AffineNetwork(std::vector<AffineLayer> layers);

  Eigen::Index input_dim() const { return layers_.front().in_dim(); }
  Eigen::Index output_dim() const { return layers_.back().out_dim(); }
  std::size_t depth() const { return layers_.size(); }
  const std::vector<AffineLayer>& layers() const { return layers_; }
  const AffineLayer& layer(std::size_t k) const { return layers_.at(k); }
  AffineLayer& mutable_layer(std::size_t k) { return layers_.at(k); }

  Vector forward(const Vector& x) const;

  /// Forward pass keeping every post-activation (activations[0] = x,
  /// activations[k] = input to layer k) and every pre-activation; used by
  /// backprop and by gradient-guided attacks.
  struct Trace {
    std::vector<Vector> activations;      // depth()+1 entries
    std::vector<Vector> preactivations;   // depth() entries
  };
  Trace forward_trace(const Vector& x) const;

  /// Composition this ∘ layer with no activation in between: the prepended
  /// affine map is folded into the first layer (W1·W, b1 + W1·b). Used to put
  /// a rescale layer in front of an encoder.
  AffineNetwork with_prepended_affine(const AffineLayer& layer) const;

  /// Encoder view: all layers except the last (classification head removed).
  AffineNetwork without_head() const;

 private:
  std::vector<AffineLayer> layers_;
};

/// Glorot-style uniform initialization in +-sqrt(6/(fan_in+fan_out)).
AffineNetwork make_network(const std::vector<Eigen::Index>& dims, Rng& rng);

// Model container: magic "REAAS1", layer count, per-layer dims, then
// row-major 64-bit weights and biases.
void save_model(const AffineNetwork& net, const std::string& path);
AffineNetwork load_model(const std::string& path);

// Human-readable export for debugging; load is exact because values are
// printed with round-trip precision.
void save_model_text(const AffineNetwork& net, const std::string& path);
AffineNetwork load_model_text(const std::string& path);

}  // namespace reaas

#endif  // REAAS_NETWORK_HPP
