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

#include "reaas/rescale.hpp"

#include <algorithm>
#include <cmath>

namespace reaas {

namespace {

// Source coordinate of an output pixel center, clamped to the valid range.
struct Axis {
  int lo, hi;
  double w_lo, w_hi;
};

Axis map_axis(int dst_index, int src_size, int dst_size) {
  const double scale = static_cast<double>(src_size) / dst_size;
  double pos = (dst_index + 0.5) * scale - 0.5;
  pos = std::clamp(pos, 0.0, static_cast<double>(src_size - 1));
  Axis a;
  a.lo = static_cast<int>(std::floor(pos));
  a.hi = std::min(a.lo + 1, src_size - 1);
  a.w_hi = pos - a.lo;
  a.w_lo = 1.0 - a.w_hi;
  return a;
}

}  // namespace

AffineLayer bilinear_rescale_matrix(int src_h, int src_w, int dst_h, int dst_w,
                                    int channels) {
  if (src_h < 1 || src_w < 1 || dst_h < 1 || dst_w < 1 || channels < 1) {
    throw InvalidInput("bilinear_rescale_matrix: all dimensions must be >= 1");
  }
  const Eigen::Index in_dim =
      static_cast<Eigen::Index>(channels) * src_h * src_w;
  const Eigen::Index out_dim =
      static_cast<Eigen::Index>(channels) * dst_h * dst_w;
  AffineLayer layer;
  layer.weight = Matrix::Zero(out_dim, in_dim);
  layer.bias = Vector::Zero(out_dim);
  for (int ch = 0; ch < channels; ++ch) {
    const Eigen::Index src_base = static_cast<Eigen::Index>(ch) * src_h * src_w;
    const Eigen::Index dst_base = static_cast<Eigen::Index>(ch) * dst_h * dst_w;
    for (int i = 0; i < dst_h; ++i) {
      const Axis ay = map_axis(i, src_h, dst_h);
      for (int j = 0; j < dst_w; ++j) {
        const Axis ax = map_axis(j, src_w, dst_w);
        const Eigen::Index row = dst_base + static_cast<Eigen::Index>(i) * dst_w + j;
        // += folds coincident neighbors at the borders into one entry.
        layer.weight(row, src_base + ay.lo * src_w + ax.lo) += ay.w_lo * ax.w_lo;
        layer.weight(row, src_base + ay.lo * src_w + ax.hi) += ay.w_lo * ax.w_hi;
        layer.weight(row, src_base + ay.hi * src_w + ax.lo) += ay.w_hi * ax.w_lo;
        layer.weight(row, src_base + ay.hi * src_w + ax.hi) += ay.w_hi * ax.w_hi;
      }
    }
  }
  return layer;
}

}  // namespace reaas
