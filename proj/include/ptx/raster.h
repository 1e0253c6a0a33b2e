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

#ifndef PYRATEXT_RASTER_H_
#define PYRATEXT_RASTER_H_

#include <string>
#include <vector>

namespace ptx {

// Row-major pixel grid with interleaved channels. Intensities live in [0,1];
// 8-bit values appear only at file boundaries.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 = gray, 3 = RGB
  std::vector<double> data;  // width*height*channels

  RasterImage() = default;
  RasterImage(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c),
        data(static_cast<size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Single-channel carrier for signed filter responses; values are unclamped.
struct FilteredPlane {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // width*height

  FilteredPlane() = default;
  FilteredPlane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

// Reads a binary PGM (P5), binary PPM (P6) or an 8-bit non-interlaced
// grayscale/RGB PNG. Stored byte b maps to b/255.
RasterImage load_image(const std::string& path);

// Writes P5 for 1-channel images, P6 for 3-channel; v maps to round(v*255).
void save_image(const RasterImage& img, const std::string& path);

// BT.601 luminance (0.299 R + 0.587 G + 0.114 B); identity on gray input.
RasterImage to_grayscale(const RasterImage& img);

// Bilinear resampling with half-pixel-center mapping
// src = (dst + 0.5) * scale - 0.5, coordinates clamped to the source grid.
// Output is clamped to [0,1].
RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h);

// Same sampling on an unclamped plane (used for filter responses).
FilteredPlane resize_bilinear_plane(const FilteredPlane& plane, int out_w, int out_h);

// Scales to the given height, width = max(1, round(w * target_h / h)).
RasterImage normalize_height(const RasterImage& img, int target_h);

}  // namespace ptx

#endif  // PYRATEXT_RASTER_H_
