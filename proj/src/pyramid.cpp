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

#include "ptx/pyramid.h"

#include <algorithm>
#include <stdexcept>

namespace ptx {

namespace {

constexpr double kTap[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

inline int reflect_clamp(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

RasterImage reduce(const RasterImage& img) {
  if (img.width < 2 || img.height < 2) {
    throw std::invalid_argument("reduce: image must be at least 2x2");
  }
  const int w = img.width, h = img.height, ch = img.channels;

  // Horizontal pass, replicate border.
  std::vector<double> rows(img.data.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int k = -2; k <= 2; ++k) {
          acc += kTap[k + 2] * img.at(reflect_clamp(x + k, w), y, c);
        }
        rows[(static_cast<size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }

  // Vertical pass fused with even-index subsampling.
  const int ow = (w + 1) / 2, oh = (h + 1) / 2;
  RasterImage out(ow, oh, ch);
  for (int oy = 0; oy < oh; ++oy) {
    const int y = 2 * oy;
    for (int ox = 0; ox < ow; ++ox) {
      const int x = 2 * ox;
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int k = -2; k <= 2; ++k) {
          const int yy = reflect_clamp(y + k, h);
          acc += kTap[k + 2] * rows[(static_cast<size_t>(yy) * w + x) * ch + c];
        }
        out.at(ox, oy, c) = acc;
      }
    }
  }
  return out;
}

GaussianPyramid build_pyramid(const RasterImage& img, int max_levels, int min_height) {
  if (max_levels < 1 || max_levels > kMaxPyramidLevels) {
    throw std::invalid_argument("build_pyramid: max_levels must be in [1,6]");
  }
  if (min_height < 2) {
    throw std::invalid_argument("build_pyramid: min_height must be >= 2");
  }
  GaussianPyramid pyr;
  pyr.levels.push_back(img);
  while (pyr.level_count() < max_levels) {
    const RasterImage& top = pyr.levels.back();
    if (top.width < 2 || top.height < 2) break;
    const int next_h = (top.height + 1) / 2;
    if (next_h < min_height) break;
    pyr.levels.push_back(reduce(top));
  }
  return pyr;
}

}  // namespace ptx
