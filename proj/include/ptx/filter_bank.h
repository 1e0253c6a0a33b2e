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

#ifndef PYRATEXT_FILTER_BANK_H_
#define PYRATEXT_FILTER_BANK_H_

#include <string>
#include <vector>

#include "ptx/pyramid.h"
#include "ptx/raster.h"

namespace ptx {

// Small odd-sized coefficient grid.
struct Kernel {
  int rows = 0;
  int cols = 0;
  std::vector<double> coeffs;  // row-major, rows*cols
  std::string name;

  double at(int r, int c) const { return coeffs[static_cast<size_t>(r) * cols + c]; }
};

// The six fixed kernels, in this order.
struct FilterBank {
  std::vector<Kernel> kernels;  // laplacian, sobel_x, sobel_y, small_blur, large_blur, sharpen
};

inline constexpr int kBankPlaneCount = 7;  // grayscale + 6 filter responses
inline constexpr int kDefaultXHeight = 60;

// laplacian [[0,1,0],[1,-4,1],[0,1,0]]; sobel_x [[-1,0,1],[-2,0,2],[-1,0,1]];
// sobel_y = transpose(sobel_x); small_blur = 3x3 box / 9;
// large_blur = 5x5 box / 25; sharpen [[0,-1,0],[-1,5,-1],[0,-1,0]].
FilterBank default_bank();

// Cross-correlation (no kernel flip) with replicate-border padding; output
// has the input's dimensions and is unclamped. Kernel dims must be odd.
FilteredPlane convolve2d(const FilteredPlane& plane, const Kernel& k);
FilteredPlane convolve2d(const RasterImage& img, const Kernel& k);  // 1-channel only

// Plane 0 = grayscale of img, planes 1..6 = that grayscale convolved with
// each bank kernel in order.
std::vector<FilteredPlane> apply_bank(const RasterImage& img, const FilterBank& bank);

// Right-to-left ordered column frames; frames row t is the t-th emitted
// frame (t = 0 is the rightmost image column).
struct FeatureSequence {
  int frame_count = 0;  // T
  int frame_dim = 0;    // D
  std::vector<double> frames;  // T*D, frame-major

  // provenance of the serialization
  int source_level = 0;
  int channel_count = 0;  // planes per frame
  int frame_height = 0;   // rows per plane; frame_dim = channel_count * frame_height

  double& at(int t, int d) { return frames[static_cast<size_t>(t) * frame_dim + d]; }
  double at(int t, int d) const { return frames[static_cast<size_t>(t) * frame_dim + d]; }
};

enum class FeatureMode { per_level, whole };

// Runs the bank, rescales every plane to height = xheight and width
// W' = max(1, round(w * xheight / h)), then serializes columns right-to-left.
// Frame layout is plane-major: d = plane * xheight + y. Each of the D feature
// dimensions is standardized to zero mean / unit variance over the sequence
// (variance floor 1e-8).
FeatureSequence featurize_level(const RasterImage& level, const FilterBank& bank,
                                int xheight);

// per_level: one sequence per pyramid level.
// whole: all levels' planes resized to the base level's grid and
// channel-concatenated into one sequence with D = 7 * level_count * xheight.
std::vector<FeatureSequence> featurize_pyramid(const GaussianPyramid& pyr,
                                               const FilterBank& bank, int xheight,
                                               FeatureMode mode);

// FSEQ1 container: magic "FSEQ1", u32-LE T, u32-LE D, then T*D f64-LE values
// row-major. The container carries no provenance metadata.
void save_feature_sequence(const FeatureSequence& seq, const std::string& path);
FeatureSequence load_feature_sequence(const std::string& path);

}  // namespace ptx

#endif  // PYRATEXT_FILTER_BANK_H_
