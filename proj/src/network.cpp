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

#include "reaas/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace reaas {

namespace {

constexpr char kMagic[6] = {'R', 'E', 'A', 'A', 'S', '1'};

void check_layer(const AffineLayer& layer, std::size_t index) {
  if (layer.weight.rows() != layer.bias.size()) {
    throw InvalidInput("layer " + std::to_string(index) +
                       ": weight rows do not match bias length");
  }
  if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
    throw InvalidInput("layer " + std::to_string(index) +
                       ": non-finite parameter");
  }
}

}  // namespace

AffineNetwork::AffineNetwork(std::vector<AffineLayer> layers)
    : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidInput("network needs at least one layer");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    check_layer(layers_[k], k);
    if (k > 0 && layers_[k].in_dim() != layers_[k - 1].out_dim()) {
      throw InvalidInput("layer " + std::to_string(k) +
                         " input dim does not chain with previous layer");
    }
  }
}

Vector AffineNetwork::forward(const Vector& x) const {
  if (x.size() != input_dim()) {
    throw InvalidInput("forward: input has dim " + std::to_string(x.size()) +
                       ", network expects " + std::to_string(input_dim()));
  }
  Vector a = x;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    Vector z = layers_[k].weight * a + layers_[k].bias;
    a = (k + 1 < layers_.size()) ? z.cwiseMax(0.0) : z;
  }
  return a;
}

AffineNetwork::Trace AffineNetwork::forward_trace(const Vector& x) const {
  if (x.size() != input_dim()) {
    throw InvalidInput("forward_trace: input dimension mismatch");
  }
  Trace t;
  t.activations.reserve(layers_.size() + 1);
  t.preactivations.reserve(layers_.size());
  t.activations.push_back(x);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    Vector z = layers_[k].weight * t.activations.back() + layers_[k].bias;
    t.preactivations.push_back(z);
    t.activations.push_back(k + 1 < layers_.size() ? Vector(z.cwiseMax(0.0))
                                                   : z);
  }
  return t;
}

AffineNetwork AffineNetwork::with_prepended_affine(
    const AffineLayer& layer) const {
  if (layer.out_dim() != input_dim()) {
    throw InvalidInput("prepended layer output dim does not match network");
  }
  std::vector<AffineLayer> fused = layers_;
  fused.front().bias = layers_.front().bias + layers_.front().weight * layer.bias;
  fused.front().weight = layers_.front().weight * layer.weight;
  return AffineNetwork(std::move(fused));
}

AffineNetwork AffineNetwork::without_head() const {
  if (layers_.size() < 2) {
    throw InvalidInput("cannot drop head of a single-layer network");
  }
  return AffineNetwork(
      std::vector<AffineLayer>(layers_.begin(), layers_.end() - 1));
}

AffineNetwork make_network(const std::vector<Eigen::Index>& dims, Rng& rng) {
  if (dims.size() < 2) throw InvalidInput("need at least input and output dim");
  std::vector<AffineLayer> layers;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const auto fan_in = dims[k];
    const auto fan_out = dims[k + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    AffineLayer layer;
    layer.weight = Matrix(fan_out, fan_in);
    for (Eigen::Index i = 0; i < fan_out; ++i)
      for (Eigen::Index j = 0; j < fan_in; ++j) layer.weight(i, j) = u(rng);
    layer.bias = Vector::Zero(fan_out);
    layers.push_back(std::move(layer));
  }
  return AffineNetwork(std::move(layers));
}

void save_model(const AffineNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t count = static_cast<std::uint32_t>(net.depth());
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const auto& layer : net.layers()) {
    const std::uint32_t rows = static_cast<std::uint32_t>(layer.out_dim());
    const std::uint32_t cols = static_cast<std::uint32_t>(layer.in_dim());
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
  }
  for (const auto& layer : net.layers()) {
    for (Eigen::Index i = 0; i < layer.out_dim(); ++i)
      for (Eigen::Index j = 0; j < layer.in_dim(); ++j) {
        const double v = layer.weight(i, j);
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    for (Eigen::Index i = 0; i < layer.out_dim(); ++i) {
      const double v = layer.bias[i];
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

AffineNetwork load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": not a REAAS1 model file");
  }
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in || count == 0) throw std::runtime_error(path + ": bad layer count");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dims(count);
  for (auto& d : dims) {
    in.read(reinterpret_cast<char*>(&d.first), sizeof(d.first));
    in.read(reinterpret_cast<char*>(&d.second), sizeof(d.second));
  }
  std::vector<AffineLayer> layers;
  for (const auto& [rows, cols] : dims) {
    AffineLayer layer;
    layer.weight = Matrix(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) {
        double v;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        layer.weight(i, j) = v;
      }
    layer.bias = Vector(rows);
    for (std::uint32_t i = 0; i < rows; ++i) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      layer.bias[i] = v;
    }
    layers.push_back(std::move(layer));
  }
  if (!in) throw std::runtime_error(path + ": truncated model file");
  return AffineNetwork(std::move(layers));
}

void save_model_text(const AffineNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "REAAS1 text\n" << net.depth() << "\n";
  out << std::setprecision(17);
  for (const auto& layer : net.layers()) {
    out << layer.out_dim() << " " << layer.in_dim() << "\n";
    for (Eigen::Index i = 0; i < layer.out_dim(); ++i) {
      for (Eigen::Index j = 0; j < layer.in_dim(); ++j) {
        out << layer.weight(i, j) << (j + 1 < layer.in_dim() ? ' ' : '\n');
      }
    }
    for (Eigen::Index i = 0; i < layer.out_dim(); ++i) {
      out << layer.bias[i] << (i + 1 < layer.out_dim() ? ' ' : '\n');
    }
  }
}

AffineNetwork load_model_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string tag, kind;
  in >> tag >> kind;
  if (tag != "REAAS1" || kind != "text") {
    throw std::runtime_error(path + ": not a REAAS1 text model");
  }
  std::size_t count = 0;
  in >> count;
  std::vector<AffineLayer> layers;
  for (std::size_t k = 0; k < count; ++k) {
    Eigen::Index rows, cols;
    in >> rows >> cols;
    AffineLayer layer;
    layer.weight = Matrix(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) in >> layer.weight(i, j);
    layer.bias = Vector(rows);
    for (Eigen::Index i = 0; i < rows; ++i) in >> layer.bias[i];
    layers.push_back(std::move(layer));
  }
  if (!in) throw std::runtime_error(path + ": truncated text model");
  return AffineNetwork(std::move(layers));
}

}  // namespace reaas
