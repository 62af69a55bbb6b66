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

#ifndef REAAS_DATASET_HPP
#define REAAS_DATASET_HPP

#include <string>
#include <vector>

#include "reaas/common.hpp"

namespace reaas {

/// Inputs share one dimension; labels are class indices in [0, num_classes).
struct LabeledDataset {
  std::vector<Vector> inputs;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return inputs.size(); }
  Eigen::Index dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
  void validate() const;
};

/// Seeded Gaussian-blob classification data with pixel-range values: class
/// means drawn in [0.2, 0.8]^dim, points clipped to [0, 1].
LabeledDataset make_blob_dataset(std::size_t per_class, int num_classes,
                                 Eigen::Index dim, double spread,
                                 std::uint64_t seed);

/// Same blob task rendered as smooth images at an arbitrary resolution:
/// class-specific low-frequency patterns sampled on an h x w grid, so the
/// identical underlying signal can be produced at several resolutions.
LabeledDataset make_image_dataset(std::size_t per_class, int num_classes, int h,
                                  int w, int channels, double noise,
                                  std::uint64_t seed);

// Binary container: header (count, dim, class count) then raw 64-bit floats
// and 32-bit labels.
void save_dataset(const LabeledDataset& data, const std::string& path);
LabeledDataset load_dataset(const std::string& path);

}  // namespace reaas

#endif  // REAAS_DATASET_HPP
