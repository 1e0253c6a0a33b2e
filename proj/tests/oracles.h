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

// Deliberately naive reference implementations used only by the test suites.
// These stay independent of the library code paths they check.

#ifndef PYRATEXT_TESTS_ORACLES_H_
#define PYRATEXT_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ptx/filter_bank.h"
#include "ptx/raster.h"

namespace oracle {

// Quadruple-loop cross-correlation with replicate borders.
inline ptx::FilteredPlane brute_convolve(const ptx::FilteredPlane& in, const ptx::Kernel& k) {
  ptx::FilteredPlane out(in.width, in.height);
  const int hr = k.rows / 2, hc = k.cols / 2;
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0;
      for (int r = 0; r < k.rows; ++r) {
        for (int c = 0; c < k.cols; ++c) {
          int yy = y + r - hr;
          int xx = x + c - hc;
          yy = std::max(0, std::min(in.height - 1, yy));
          xx = std::max(0, std::min(in.width - 1, xx));
          acc += k.at(r, c) * in.at(xx, yy);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

// Full 2-D binomial smoothing followed by even-index subsampling, written as
// one direct double loop over the 5x5 outer-product kernel.
inline ptx::RasterImage brute_reduce(const ptx::RasterImage& img) {
  static const double tap[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const int ow = (img.width + 1) / 2, oh = (img.height + 1) / 2;
  ptx::RasterImage out(ow, oh, img.channels);
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0;
        for (int r = -2; r <= 2; ++r) {
          for (int q = -2; q <= 2; ++q) {
            const int y = std::max(0, std::min(img.height - 1, 2 * oy + r));
            const int x = std::max(0, std::min(img.width - 1, 2 * ox + q));
            acc += tap[r + 2] * tap[q + 2] * img.at(x, y, c);
          }
        }
        out.at(ox, oy, c) = acc;
      }
    }
  }
  return out;
}

// CTC loss by exhaustive enumeration of all K^T paths: collapse each path
// (merge repeats, drop blanks) and sum the probability of the ones matching
// the label. Only usable for tiny T and K.
inline double brute_ctc_loss(const Eigen::MatrixXd& posteriors, const std::vector<int>& label) {
  const int T = static_cast<int>(posteriors.rows());
  const int K = static_cast<int>(posteriors.cols());
  double total = 0.0;
  std::vector<int> path(T, 0);
  while (true) {
    std::vector<int> collapsed;
    int prev = 0;
    for (int t = 0; t < T; ++t) {
      if (path[t] != 0 && path[t] != prev) collapsed.push_back(path[t]);
      prev = path[t];
    }
    if (collapsed == label) {
      double p = 1.0;
      for (int t = 0; t < T; ++t) p *= std::max(posteriors(t, path[t]), 1e-12);
      total += p;
    }
    // next path in odometer order
    int pos = T - 1;
    while (pos >= 0 && path[pos] == K - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }
  return -std::log(total);
}

}  // namespace oracle

#endif  // PYRATEXT_TESTS_ORACLES_H_
