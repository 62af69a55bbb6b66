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

#ifndef REAAS_TRAIN_HPP
#define REAAS_TRAIN_HPP

#include <optional>
#include <span>
#include <vector>

#include "reaas/dataset.hpp"
#include "reaas/network.hpp"
#include "reaas/spectral.hpp"

namespace reaas {

struct TrainOptions {
  int epochs = 25;
  double lr = 0.06;
  int batch = 512;
  // Gaussian noise added to every input in every epoch; unset or 0 = clean.
  std::optional<double> noise_sigma;
  // Spectral-norm penalty over all layers except the output layer.
  std::optional<SpectralConfig> spectral;
  std::uint64_t seed = 0;
};

/// Per-parameter gradients of mean softmax cross-entropy over a batch.
struct Gradients {
  std::vector<Matrix> weight;
  std::vector<Vector> bias;
  double loss = 0.0;
};

double cross_entropy_loss(const AffineNetwork& net,
                          std::span<const Vector> inputs,
                          std::span<const int> labels);

Gradients cross_entropy_gradients(const AffineNetwork& net,
                                  std::span<const Vector> inputs,
                                  std::span<const int> labels);

/// Pulls a gradient on the output vector back to the input through the ReLU
/// masks recorded in the trace.
Vector input_backprop(const AffineNetwork& net,
                      const AffineNetwork::Trace& trace,
                      const Vector& output_grad);

/// Mini-batch SGD on softmax cross-entropy, shuffled per epoch from the seed.
AffineNetwork train_classifier(AffineNetwork net, const LabeledDataset& data,
                               const TrainOptions& opts);

double accuracy(const AffineNetwork& net, const LabeledDataset& data);

}  // namespace reaas

#endif  // REAAS_TRAIN_HPP
