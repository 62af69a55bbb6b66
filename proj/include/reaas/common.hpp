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

#ifndef REAAS_COMMON_HPP
#define REAAS_COMMON_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace reaas {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Thrown when an input violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numeric procedure produces non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Derives an independent stream for (seed, index) pairs so parallel and
// serial consumers see identical draws.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{seed, index};
  return Rng(seq);
}

inline Vector gaussian_vector(Rng& rng, Eigen::Index dim, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace reaas

#endif  // REAAS_COMMON_HPP
