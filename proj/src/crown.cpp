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

#include "reaas/crown.hpp"

#include <cmath>

namespace reaas {

namespace {

// Chord/line relaxation of one ReLU neuron over its pre-activation range.
struct ReluLines {
  double upper_slope, upper_intercept;
  double lower_slope, lower_intercept;
};

ReluLines relax_relu(double l, double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0, 0.0};
  if (l >= 0.0) return {1.0, 0.0, 1.0, 0.0};
  const double us = u / (u - l);
  // Adaptive lower slope: follow the side with more mass.
  const double ls = (u >= -l) ? 1.0 : 0.0;
  return {us, -us * l, ls, 0.0};
}

// One linear bounding function per output of layer `target`'s pre-activation,
// obtained by backward substitution through all earlier ReLU layers.
struct BackwardResult {
  Matrix lower_coeffs;
  Vector lower_offset;
  Matrix upper_coeffs;
  Vector upper_offset;
};

BackwardResult backward_to_input(
    const AffineNetwork& net, std::size_t target,
    const std::vector<PreactivationInterval>& intervals) {
  BackwardResult r;
  r.upper_coeffs = net.layer(target).weight;
  r.upper_offset = net.layer(target).bias;
  r.lower_coeffs = net.layer(target).weight;
  r.lower_offset = net.layer(target).bias;

  for (std::size_t j = target; j-- > 0;) {
    const auto& interval = intervals[j];
    const Eigen::Index width = interval.low.size();
    std::vector<ReluLines> lines(static_cast<std::size_t>(width));
    for (Eigen::Index n = 0; n < width; ++n) {
      lines[static_cast<std::size_t>(n)] =
          relax_relu(interval.low[n], interval.high[n]);
    }

    const Eigen::Index rows = r.upper_coeffs.rows();
    Matrix up_z(rows, width), lo_z(rows, width);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index n = 0; n < width; ++n) {
        const auto& ln = lines[static_cast<std::size_t>(n)];
        const double au = r.upper_coeffs(i, n);
        if (au >= 0.0) {
          up_z(i, n) = au * ln.upper_slope;
          r.upper_offset[i] += au * ln.upper_intercept;
        } else {
          up_z(i, n) = au * ln.lower_slope;
          r.upper_offset[i] += au * ln.lower_intercept;
        }
        const double al = r.lower_coeffs(i, n);
        if (al >= 0.0) {
          lo_z(i, n) = al * ln.lower_slope;
          r.lower_offset[i] += al * ln.lower_intercept;
        } else {
          lo_z(i, n) = al * ln.upper_slope;
          r.lower_offset[i] += al * ln.upper_intercept;
        }
      }
    }
    r.upper_offset.noalias() += up_z * net.layer(j).bias;
    r.lower_offset.noalias() += lo_z * net.layer(j).bias;
    r.upper_coeffs.noalias() = up_z * net.layer(j).weight;
    r.lower_coeffs.noalias() = lo_z * net.layer(j).weight;
  }
  return r;
}

std::vector<PreactivationInterval> hidden_intervals(const AffineNetwork& net,
                                                    const Vector& center,
                                                    double rho,
                                                    std::size_t count) {
  std::vector<PreactivationInterval> intervals;
  intervals.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const BackwardResult lines = backward_to_input(net, j, intervals);
    const Eigen::Index width = lines.lower_coeffs.rows();
    PreactivationInterval interval;
    interval.low = Vector(width);
    interval.high = Vector(width);
    for (Eigen::Index n = 0; n < width; ++n) {
      interval.low[n] = ball_extremum(lines.lower_coeffs.row(n).transpose(),
                                      lines.lower_offset[n], center, rho,
                                      Direction::Min);
      interval.high[n] = ball_extremum(lines.upper_coeffs.row(n).transpose(),
                                       lines.upper_offset[n], center, rho,
                                       Direction::Max);
      if (!std::isfinite(interval.low[n]) || !std::isfinite(interval.high[n])) {
        throw NumericError("propagate_bounds: non-finite bound at layer " +
                           std::to_string(j));
      }
    }
    intervals.push_back(std::move(interval));
  }
  return intervals;
}

}  // namespace

double ball_extremum(const Vector& coeffs, double offset, const Vector& center,
                     double rho, Direction direction) {
  if (rho < 0.0) throw InvalidInput("ball_extremum: rho must be >= 0");
  if (coeffs.size() != center.size()) {
    throw InvalidInput("ball_extremum: dimension mismatch");
  }
  const double base = coeffs.dot(center) + offset;
  const double swing = rho * coeffs.norm();
  return direction == Direction::Max ? base + swing : base - swing;
}

std::vector<PreactivationInterval> preactivation_intervals(
    const AffineNetwork& net, const Vector& center, double rho) {
  if (center.size() != net.input_dim()) {
    throw InvalidInput("preactivation_intervals: center dimension mismatch");
  }
  return hidden_intervals(net, center, rho, net.depth() - 1);
}

BoundingLines propagate_bounds(const AffineNetwork& net, const Vector& center,
                               double rho) {
  if (center.size() != net.input_dim()) {
    throw InvalidInput("propagate_bounds: center dimension mismatch");
  }
  if (rho < 0.0) throw InvalidInput("propagate_bounds: rho must be >= 0");
  const auto intervals = hidden_intervals(net, center, rho, net.depth() - 1);
  BackwardResult r = backward_to_input(net, net.depth() - 1, intervals);
  if (!r.lower_coeffs.allFinite() || !r.upper_coeffs.allFinite() ||
      !r.lower_offset.allFinite() || !r.upper_offset.allFinite()) {
    throw NumericError("propagate_bounds: non-finite bound at layer " +
                       std::to_string(net.depth() - 1));
  }
  return {std::move(r.lower_coeffs), std::move(r.lower_offset),
          std::move(r.upper_coeffs), std::move(r.upper_offset)};
}

BcCertificate bc_feature_radius(const AffineNetwork& classifier,
                                const Vector& v, double precision,
                                double rho_high) {
  if (precision <= 0.0) {
    throw InvalidInput("bc_feature_radius: precision must be > 0");
  }
  const Vector logits = classifier.forward(v);
  Eigen::Index label_index;
  logits.maxCoeff(&label_index);
  const int label = static_cast<int>(label_index);
  const Eigen::Index classes = logits.size();
  if (classes < 2) return {label, rho_high};

  // Margin network: last layer replaced by rows (w_y - w_l), so the bound
  // couples the competing logits instead of relaxing them independently.
  std::vector<AffineLayer> layers = classifier.layers();
  Matrix margin_w(classes - 1, layers.back().in_dim());
  Vector margin_b(classes - 1);
  Eigen::Index row = 0;
  for (Eigen::Index l = 0; l < classes; ++l) {
    if (l == label_index) continue;
    margin_w.row(row) =
        layers.back().weight.row(label_index) - layers.back().weight.row(l);
    margin_b[row] = layers.back().bias[label_index] - layers.back().bias[l];
    ++row;
  }
  layers.back().weight = std::move(margin_w);
  layers.back().bias = std::move(margin_b);
  const AffineNetwork margin_net(std::move(layers));

  const auto holds = [&](double r) {
    const BoundingLines lines = propagate_bounds(margin_net, v, r);
    for (Eigen::Index i = 0; i < lines.lower_coeffs.rows(); ++i) {
      const double lo = ball_extremum(lines.lower_coeffs.row(i).transpose(),
                                      lines.lower_offset[i], v, r,
                                      Direction::Min);
      if (!(lo > 0.0)) return false;
    }
    return true;
  };

  if (!holds(0.0)) return {label, 0.0};  // tie at the clean point
  double lo = 0.0, hi = rho_high;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) lo = mid;
    else hi = mid;
  }
  return {label, lo};
}

}  // namespace reaas
