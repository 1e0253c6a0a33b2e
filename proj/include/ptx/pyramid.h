// Copyright 2026 The pyratext authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PYRATEXT_PYRAMID_H_
#define PYRATEXT_PYRAMID_H_

#include <vector>

#include "ptx/raster.h"

namespace ptx {

inline constexpr int kMaxPyramidLevels = 6;
inline constexpr int kDefaultMinHeight = 30;

// Ordered list of progressively reduced images; levels[0] is the base.
// Consecutive levels satisfy dims(k+1) = ceil(dims(k) / 2).
struct GaussianPyramid {
  std::vector<RasterImage> levels;

  int level_count() const { return static_cast<int>(levels.size()); }
  const RasterImage& base() const { return levels.front(); }
};

// Smooth-and-halve: separable 5-tap binomial [1,4,6,4,1]/16 per channel
// (replicate border), then keep pixels at even indices. Output dims are
// ceil(input / 2). Requires input at least 2x2.
RasterImage reduce(const RasterImage& img);

// levels[0] = input; keeps reducing while fewer than max_levels levels exist
// and the next level's height stays >= min_height. max_levels in [1,6],
// min_height >= 2. A 1-level pyramid is valid output for tiny inputs.
GaussianPyramid build_pyramid(const RasterImage& img, int max_levels,
                              int min_height = kDefaultMinHeight);

}  // namespace ptx

#endif  // PYRATEXT_PYRAMID_H_
