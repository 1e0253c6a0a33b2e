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

#include <doctest.h>

#include <algorithm>

#include "oracles.h"
#include "ptx/pyramid.h"
#include "ptx/rng.h"

using namespace ptx;

namespace {

RasterImage random_image(int w, int h, int c, uint64_t seed) {
  RasterImage img(w, h, c);
  Rng rng(seed);
  for (double& v : img.data) v = rng.uniform();
  return img;
}

}  // namespace

TEST_CASE("reduce keeps constants and ceil-halves dimensions") {
  const RasterImage constant(8, 8, 1, 0.41);
  const RasterImage out = reduce(constant);
  CHECK(out.width == 4);
  CHECK(out.height == 4);
  for (double v : out.data) CHECK(v == doctest::Approx(0.41).epsilon(1e-12));

  const RasterImage odd = reduce(RasterImage(7, 7, 1, 0.0));
  CHECK(odd.width == 4);
  CHECK(odd.height == 4);
}

TEST_CASE("reduce of a centered impulse gives 36/256") {
  RasterImage img(9, 9, 1, 0.0);
  img.at(4, 4) = 1.0;
  const RasterImage out = reduce(img);
  CHECK(out.at(2, 2) == doctest::Approx(36.0 / 256.0).epsilon(1e-12));
}

TEST_CASE("reduce matches the brute-force separable oracle") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    const RasterImage img = random_image(11, 9, 1, seed);
    const RasterImage fast = reduce(img);
    const RasterImage ref = oracle::brute_reduce(img);
    REQUIRE(fast.width == ref.width);
    REQUIRE(fast.height == ref.height);
    for (size_t i = 0; i < fast.data.size(); ++i) {
      CHECK(fast.data[i] == doctest::Approx(ref.data[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("reduce rejects images smaller than 2x2") {
  CHECK_THROWS(reduce(RasterImage(1, 5, 1)));
  CHECK_THROWS(reduce(RasterImage(5, 1, 1)));
}

TEST_CASE("reduce commutes with channel splitting") {
  const RasterImage img = random_image(10, 8, 3, 77);
  const RasterImage whole = reduce(img);
  for (int c = 0; c < 3; ++c) {
    RasterImage chan(img.width, img.height, 1);
    for (size_t p = 0; p < img.pixel_count(); ++p) chan.data[p] = img.data[p * 3 + c];
    const RasterImage rc = reduce(chan);
    for (size_t p = 0; p < rc.data.size(); ++p) {
      CHECK(rc.data[p] == doctest::Approx(whole.data[p * 3 + c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_pyramid stops on min_height and max_levels") {
  const RasterImage base(512, 64, 1, 0.5);

  const GaussianPyramid full = build_pyramid(base, 6, 2);
  REQUIRE(full.level_count() == 6);
  const int heights[] = {64, 32, 16, 8, 4, 2};
  for (int k = 0; k < 6; ++k) CHECK(full.levels[k].height == heights[k]);

  const GaussianPyramid floored = build_pyramid(base, 6, 30);
  REQUIRE(floored.level_count() == 2);
  CHECK(floored.levels[1].height == 32);

  const GaussianPyramid single = build_pyramid(base, 1, 2);
  CHECK(single.level_count() == 1);
  CHECK(single.levels[0].width == 512);

  CHECK_THROWS(build_pyramid(base, 0, 2));
  CHECK_THROWS(build_pyramid(base, 7, 2));
  CHECK_THROWS(build_pyramid(base, 3, 1));
}

TEST_CASE("pyramid levels stay within the previous level's range") {
  const RasterImage base = random_image(64, 48, 1, 5);
  const GaussianPyramid pyr = build_pyramid(base, 6, 2);
  for (int k = 1; k < pyr.level_count(); ++k) {
    const auto& prev = pyr.levels[k - 1].data;
    const double lo = *std::min_element(prev.begin(), prev.end());
    const double hi = *std::max_element(prev.begin(), prev.end());
    for (double v : pyr.levels[k].data) {
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("full pyramid total pixel count stays under 1.40x the base") {
  const RasterImage base = random_image(127, 65, 1, 9);
  const GaussianPyramid pyr = build_pyramid(base, 6, 2);
  size_t total = 0;
  for (const RasterImage& level : pyr.levels) total += level.pixel_count();
  CHECK(static_cast<double>(total) <= 1.40 * static_cast<double>(base.pixel_count()));
}
