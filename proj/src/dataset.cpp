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

#include "reaas/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace reaas {

void LabeledDataset::validate() const {
  if (inputs.size() != labels.size()) {
    throw InvalidInput("dataset: inputs and labels differ in length");
  }
  if (num_classes <= 0) throw InvalidInput("dataset: num_classes must be > 0");
  const Eigen::Index d = dim();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != d) {
      throw InvalidInput("dataset: input " + std::to_string(i) +
                         " has inconsistent dimension");
    }
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw InvalidInput("dataset: label out of range at " + std::to_string(i));
    }
  }
}

LabeledDataset make_blob_dataset(std::size_t per_class, int num_classes,
                                 Eigen::Index dim, double spread,
                                 std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> mean_dist(0.2, 0.8);
  std::vector<Vector> means;
  for (int c = 0; c < num_classes; ++c) {
    Vector m(dim);
    for (Eigen::Index i = 0; i < dim; ++i) m[i] = mean_dist(rng);
    means.push_back(std::move(m));
  }
  LabeledDataset data;
  data.num_classes = num_classes;
  for (int c = 0; c < num_classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s) {
      Vector x = means[c] + gaussian_vector(rng, dim, spread);
      x = x.cwiseMax(0.0).cwiseMin(1.0);
      data.inputs.push_back(std::move(x));
      data.labels.push_back(c);
    }
  }
  return data;
}

LabeledDataset make_image_dataset(std::size_t per_class, int num_classes, int h,
                                  int w, int channels, double noise,
                                  std::uint64_t seed) {
  // Class signal is a sum of low-frequency sinusoids over normalized [0,1]^2
  // coordinates, so the same sample renders consistently at any resolution.
  constexpr int kWaves = 3;
  struct Wave {
    double amp, fy, fx, phase;
  };
  Rng class_rng(seed);
  std::uniform_real_distribution<double> amp_dist(0.1, 0.25);
  std::uniform_real_distribution<double> freq_dist(0.5, 2.0);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  std::vector<std::vector<Wave>> waves(num_classes);
  for (auto& cls : waves) {
    for (int k = 0; k < kWaves; ++k) {
      cls.push_back({amp_dist(class_rng), freq_dist(class_rng),
                     freq_dist(class_rng), phase_dist(class_rng)});
    }
  }
  LabeledDataset data;
  data.num_classes = num_classes;
  const Eigen::Index dim = static_cast<Eigen::Index>(channels) * h * w;
  std::uint64_t sample_index = 0;
  for (int c = 0; c < num_classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s, ++sample_index) {
      // Jitter is drawn per sample, independent of resolution.
      Rng jrng = substream(seed, sample_index);
      std::normal_distribution<double> jitter(0.0, noise);
      std::vector<Wave> sample_waves = waves[c];
      for (auto& wv : sample_waves) {
        wv.amp += jitter(jrng);
        wv.phase += jitter(jrng);
      }
      Vector x(dim);
      for (int ch = 0; ch < channels; ++ch) {
        for (int i = 0; i < h; ++i) {
          for (int j = 0; j < w; ++j) {
            const double v = (i + 0.5) / h;
            const double u = (j + 0.5) / w;
            double val = 0.5;
            for (const auto& wv : sample_waves) {
              val += wv.amp * std::sin(2.0 * std::numbers::pi *
                                           (wv.fy * v + wv.fx * u) +
                                       wv.phase + 0.7 * ch);
            }
            x[static_cast<Eigen::Index>(ch) * h * w + i * w + j] =
                std::clamp(val, 0.0, 1.0);
          }
        }
      }
      data.inputs.push_back(std::move(x));
      data.labels.push_back(c);
    }
  }
  return data;
}

void save_dataset(const LabeledDataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::uint64_t count = data.size();
  const std::uint64_t dim = static_cast<std::uint64_t>(data.dim());
  const std::int32_t classes = data.num_classes;
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  out.write(reinterpret_cast<const char*>(&classes), sizeof(classes));
  for (const auto& x : data.inputs) {
    out.write(reinterpret_cast<const char*>(x.data()),
              static_cast<std::streamsize>(sizeof(double) * x.size()));
  }
  for (int label : data.labels) {
    const std::int32_t l = label;
    out.write(reinterpret_cast<const char*>(&l), sizeof(l));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t count = 0, dim = 0;
  std::int32_t classes = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  in.read(reinterpret_cast<char*>(&classes), sizeof(classes));
  LabeledDataset data;
  data.num_classes = classes;
  for (std::uint64_t i = 0; i < count; ++i) {
    Vector x(static_cast<Eigen::Index>(dim));
    in.read(reinterpret_cast<char*>(x.data()),
            static_cast<std::streamsize>(sizeof(double) * dim));
    data.inputs.push_back(std::move(x));
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    std::int32_t l = 0;
    in.read(reinterpret_cast<char*>(&l), sizeof(l));
    data.labels.push_back(l);
  }
  if (!in) throw std::runtime_error(path + ": truncated dataset file");
  data.validate();
  return data;
}

}  // namespace reaas
