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

#include "reaas/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace reaas {

namespace {

double log_sum_exp(const Vector& z) {
  const double m = z.maxCoeff();
  return m + std::log((z.array() - m).exp().sum());
}

Vector softmax(const Vector& z) {
  const double m = z.maxCoeff();
  Vector e = (z.array() - m).exp();
  return e / e.sum();
}

}  // namespace

double cross_entropy_loss(const AffineNetwork& net,
                          std::span<const Vector> inputs,
                          std::span<const int> labels) {
  double loss = 0.0;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const Vector z = net.forward(inputs[s]);
    loss += log_sum_exp(z) - z[labels[s]];
  }
  return loss / static_cast<double>(inputs.size());
}

Gradients cross_entropy_gradients(const AffineNetwork& net,
                                  std::span<const Vector> inputs,
                                  std::span<const int> labels) {
  if (inputs.empty() || inputs.size() != labels.size()) {
    throw InvalidInput("cross_entropy_gradients: bad batch");
  }
  Gradients g;
  g.weight.reserve(net.depth());
  g.bias.reserve(net.depth());
  for (const auto& layer : net.layers()) {
    g.weight.emplace_back(Matrix::Zero(layer.out_dim(), layer.in_dim()));
    g.bias.emplace_back(Vector::Zero(layer.out_dim()));
  }
  const double inv_m = 1.0 / static_cast<double>(inputs.size());
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const auto trace = net.forward_trace(inputs[s]);
    const Vector& logits = trace.activations.back();
    g.loss += (log_sum_exp(logits) - logits[labels[s]]) * inv_m;
    Vector delta = softmax(logits);
    delta[labels[s]] -= 1.0;
    delta *= inv_m;
    for (std::size_t k = net.depth(); k-- > 0;) {
      g.weight[k].noalias() += delta * trace.activations[k].transpose();
      g.bias[k] += delta;
      if (k > 0) {
        Vector back = net.layer(k).weight.transpose() * delta;
        // ReLU mask from the previous pre-activation.
        delta = (trace.preactivations[k - 1].array() > 0.0)
                    .select(back.array(), 0.0);
      }
    }
  }
  return g;
}

Vector input_backprop(const AffineNetwork& net,
                      const AffineNetwork::Trace& trace,
                      const Vector& output_grad) {
  Vector delta = output_grad;
  for (std::size_t k = net.depth(); k-- > 0;) {
    Vector back = net.layer(k).weight.transpose() * delta;
    if (k > 0) {
      delta = (trace.preactivations[k - 1].array() > 0.0)
                  .select(back.array(), 0.0);
    } else {
      delta = back;
    }
  }
  return delta;
}

AffineNetwork train_classifier(AffineNetwork net, const LabeledDataset& data,
                               const TrainOptions& opts) {
  data.validate();
  if (data.size() == 0) throw InvalidInput("train: empty dataset");
  if (opts.epochs < 1) throw InvalidInput("train: epochs must be >= 1");
  if (opts.lr <= 0.0) throw InvalidInput("train: lr must be > 0");
  if (opts.batch < 1) throw InvalidInput("train: batch must be >= 1");

  const bool noisy = opts.noise_sigma.has_value() && *opts.noise_sigma > 0.0;
  const bool regularized =
      opts.spectral.has_value() && opts.spectral->lambda > 0.0 &&
      net.depth() >= 2;
  const std::size_t n_reg = regularized ? net.depth() - 1 : 0;

  Rng rng(opts.seed);
  // Power-iteration state lives across mini-batches (warm start).
  Rng power_rng = substream(opts.seed, 0x9e3779b97f4a7c15ull);
  std::vector<std::optional<Vector>> power_state(n_reg);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(opts.batch)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(opts.batch));
      std::vector<Vector> inputs;
      std::vector<int> labels;
      inputs.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        Vector x = data.inputs[order[i]];
        if (noisy) x += gaussian_vector(rng, x.size(), *opts.noise_sigma);
        inputs.push_back(std::move(x));
        labels.push_back(data.labels[order[i]]);
      }
      Gradients g = cross_entropy_gradients(net, inputs, labels);
      if (!std::isfinite(g.loss)) {
        throw NumericError("training diverged at epoch " +
                           std::to_string(epoch + 1));
      }
      if (regularized) {
        std::vector<double> norms(n_reg);
        std::vector<Vector> vs(n_reg), us(n_reg);
        for (std::size_t j = 0; j < n_reg; ++j) {
          std::uniform_int_distribution<std::uint64_t> any;
          const std::uint64_t init_seed = power_state[j] ? 0 : any(power_rng);
          auto [sigma, v] = spectral_norm_power(
              net.layer(j), power_state[j], opts.spectral->power_iters,
              init_seed);
          power_state[j] = v;
          norms[j] = sigma;
          vs[j] = v;
          Vector wv = net.layer(j).weight * v;
          us[j] = sigma > 0.0 ? Vector(wv / sigma) : Vector(Vector::Zero(wv.size()));
        }
        for (std::size_t j = 0; j < n_reg; ++j) {
          double rest = 1.0;
          for (std::size_t k = 0; k < n_reg; ++k)
            if (k != j) rest *= norms[k];
          // d(lambda * prod sigma)/dW_j with singular vectors held fixed.
          g.weight[j].noalias() +=
              opts.spectral->lambda * rest * (us[j] * vs[j].transpose());
        }
      }
      for (std::size_t k = 0; k < net.depth(); ++k) {
        auto& layer = net.mutable_layer(k);
        layer.weight -= opts.lr * g.weight[k];
        layer.bias -= opts.lr * g.bias[k];
      }
    }
  }
  return net;
}

double accuracy(const AffineNetwork& net, const LabeledDataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Eigen::Index best;
    net.forward(data.inputs[i]).maxCoeff(&best);
    if (static_cast<int>(best) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace reaas
