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

// Test-only oracles and adversaries. Everything here is deliberately
// independent of the library's propagation / certification code paths.

#ifndef REAAS_TESTS_SUPPORT_HPP
#define REAAS_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "reaas/network.hpp"
#include "reaas/train.hpp"

namespace reaas::test {

inline AffineNetwork random_network(const std::vector<Eigen::Index>& dims,
                                    Rng& rng, double weight_scale = 1.0,
                                    double bias_scale = 0.1) {
  std::vector<AffineLayer> layers;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    AffineLayer layer;
    const double scale =
        weight_scale / std::sqrt(static_cast<double>(dims[k]));
    layer.weight = Matrix(dims[k + 1], dims[k]);
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
        layer.weight(i, j) = scale * normal(rng);
    layer.bias = Vector(dims[k + 1]);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
      layer.bias[i] = bias_scale * normal(rng);
    layers.push_back(std::move(layer));
  }
  return AffineNetwork(std::move(layers));
}

inline Vector random_vector(Rng& rng, Eigen::Index dim, double lo = 0.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

// Uniform point in the closed l2 ball (radius^d-corrected).
inline Vector ball_point(Rng& rng, Eigen::Index dim, double rho) {
  Vector dir = gaussian_vector(rng, dim, 1.0);
  const double n = dir.norm();
  if (n == 0.0) return Vector::Zero(dim);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rho * std::pow(u(rng), 1.0 / static_cast<double>(dim));
  return dir * (r / n);
}

inline Vector sphere_point(Rng& rng, Eigen::Index dim, double rho) {
  Vector dir = gaussian_vector(rng, dim, 1.0);
  const double n = dir.norm();
  return n == 0.0 ? Vector::Zero(dim) : Vector(dir * (rho / n));
}

// Straight-line re-evaluation of the network with plain loops; the oracle the
// library's Eigen-based forward is checked against.
inline std::vector<double> naive_forward(const AffineNetwork& net,
                                         const Vector& x) {
  std::vector<double> a(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) a[static_cast<std::size_t>(i)] = x[i];
  for (std::size_t k = 0; k < net.depth(); ++k) {
    const auto& layer = net.layer(k);
    std::vector<double> z(static_cast<std::size_t>(layer.out_dim()), 0.0);
    for (Eigen::Index i = 0; i < layer.out_dim(); ++i) {
      double acc = layer.bias[i];
      for (Eigen::Index j = 0; j < layer.in_dim(); ++j) {
        acc += layer.weight(i, j) * a[static_cast<std::size_t>(j)];
      }
      z[static_cast<std::size_t>(i)] = acc;
    }
    if (k + 1 < net.depth()) {
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    }
    a = std::move(z);
  }
  return a;
}

inline int argmax_label(const AffineNetwork& net, const Vector& x) {
  Eigen::Index best;
  net.forward(x).maxCoeff(&best);
  return static_cast<int>(best);
}

// Projected gradient ascent on the runner-up margin: tries to flip the
// argmax of `net` at x within an l2 budget. Returns true if any restart
// flips the prediction.
inline bool pgd_flips_argmax(const AffineNetwork& net, const Vector& x,
                             double budget, int restarts, Rng& rng,
                             int steps = 40) {
  const int clean = argmax_label(net, x);
  for (int r = 0; r < restarts; ++r) {
    Vector delta = r == 0 ? Vector(Vector::Zero(x.size()))
                          : ball_point(rng, x.size(), budget);
    for (int s = 0; s < steps; ++s) {
      const auto trace = net.forward_trace(x + delta);
      const Vector& logits = trace.activations.back();
      Eigen::Index top;
      logits.maxCoeff(&top);
      if (static_cast<int>(top) != clean) return true;
      // Ascend logit_runnerup - logit_clean.
      Eigen::Index runner = -1;
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index l = 0; l < logits.size(); ++l) {
        if (l != clean && logits[l] > best) {
          best = logits[l];
          runner = l;
        }
      }
      Vector out_grad = Vector::Zero(logits.size());
      out_grad[runner] = 1.0;
      out_grad[clean] = -1.0;
      Vector g = input_backprop(net, trace, out_grad);
      const double gn = g.norm();
      if (gn == 0.0) break;
      delta += (budget / 8.0) * g / gn;
      const double dn = delta.norm();
      if (dn > budget) delta *= budget / dn;
    }
    if (argmax_label(net, x + delta) != clean) return true;
  }
  return false;
}

// Gradient ascent on ||f(x+delta) - f(x)||^2 within an l2 budget; returns the
// largest feature distance found.
inline double max_feature_distance_attack(const AffineNetwork& encoder,
                                          const Vector& x, double budget,
                                          int restarts, Rng& rng,
                                          int steps = 40) {
  const Vector clean = encoder.forward(x);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Vector delta = r == 0 ? sphere_point(rng, x.size(), budget)
                          : ball_point(rng, x.size(), budget);
    for (int s = 0; s < steps; ++s) {
      const auto trace = encoder.forward_trace(x + delta);
      const Vector diff = trace.activations.back() - clean;
      best = std::max(best, diff.norm());
      Vector g = input_backprop(encoder, trace, Vector(2.0 * diff));
      const double gn = g.norm();
      if (gn == 0.0) break;
      delta += (budget / 8.0) * g / gn;
      const double dn = delta.norm();
      if (dn > budget) delta *= budget / dn;
    }
    best = std::max(best, (encoder.forward(x + delta) - clean).norm());
  }
  return best;
}

// End-to-end flip attack on classifier(encoder(x)) with the perturbation in
// input space; gradient chains through both networks.
inline bool pgd_flips_pipeline(const AffineNetwork& encoder,
                               const AffineNetwork& classifier, const Vector& x,
                               double budget, int restarts, Rng& rng,
                               int steps = 40) {
  const int clean = argmax_label(classifier, encoder.forward(x));
  for (int r = 0; r < restarts; ++r) {
    Vector delta = r == 0 ? Vector(Vector::Zero(x.size()))
                          : ball_point(rng, x.size(), budget);
    for (int s = 0; s < steps; ++s) {
      const auto enc_trace = encoder.forward_trace(x + delta);
      const auto cls_trace = classifier.forward_trace(enc_trace.activations.back());
      const Vector& logits = cls_trace.activations.back();
      Eigen::Index top;
      logits.maxCoeff(&top);
      if (static_cast<int>(top) != clean) return true;
      Eigen::Index runner = -1;
      double bestv = -std::numeric_limits<double>::infinity();
      for (Eigen::Index l = 0; l < logits.size(); ++l) {
        if (l != clean && logits[l] > bestv) {
          bestv = logits[l];
          runner = l;
        }
      }
      Vector out_grad = Vector::Zero(logits.size());
      out_grad[runner] = 1.0;
      out_grad[clean] = -1.0;
      const Vector feat_grad = input_backprop(classifier, cls_trace, out_grad);
      Vector g = input_backprop(encoder, enc_trace, feat_grad);
      const double gn = g.norm();
      if (gn == 0.0) break;
      delta += (budget / 8.0) * g / gn;
      const double dn = delta.norm();
      if (dn > budget) delta *= budget / dn;
    }
    if (argmax_label(classifier,
                     encoder.forward(x + delta)) != clean) {
      return true;
    }
  }
  return false;
}

// Largest singular value from Eigen's SVD; the oracle power iteration is
// compared against.
inline double svd_spectral_norm(const Matrix& w) {
  return w.jacobiSvd().singularValues()(0);
}

}  // namespace reaas::test

#endif  // REAAS_TESTS_SUPPORT_HPP
