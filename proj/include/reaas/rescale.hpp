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

#ifndef REAAS_RESCALE_HPP
#define REAAS_RESCALE_HPP

#include "reaas/network.hpp"

namespace reaas {

/// Bilinear interpolation from src to dst resolution as an affine layer with
/// zero bias. Images are flattened channel-major (channel, row, column).
/// Pixel centers are mapped proportionally (no corner alignment); each output
/// row has at most 4 nonzeros per channel, nonnegative, summing to 1.
AffineLayer bilinear_rescale_matrix(int src_h, int src_w, int dst_h, int dst_w,
                                    int channels);

}  // namespace reaas

#endif  // REAAS_RESCALE_HPP
