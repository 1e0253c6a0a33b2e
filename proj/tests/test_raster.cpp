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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "ptx/raster.h"
#include "ptx/rng.h"

using namespace ptx;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_bytes(const std::string& path, const void* data, size_t n) {
  std::ofstream out(path, std::ios::binary);
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

// 2x1 grayscale PNG with pixels [0, 255]
static const unsigned char kPngGray2x1[] = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D,
    0x49, 0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01,
    0x08, 0x00, 0x00, 0x00, 0x00, 0xD1, 0x49, 0x20, 0x56, 0x00, 0x00, 0x00,
    0x0B, 0x49, 0x44, 0x41, 0x54, 0x78, 0xDA, 0x63, 0x60, 0xF8, 0x0F, 0x00,
    0x01, 0x02, 0x01, 0x00, 0xD1, 0x1A, 0xCB, 0x8F, 0x00, 0x00, 0x00, 0x00,
    0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82,
};

// 1x1 RGB PNG, pure red
static const unsigned char kPngRed1x1[] = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D,
    0x49, 0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01,
    0x08, 0x02, 0x00, 0x00, 0x00, 0x90, 0x77, 0x53, 0xDE, 0x00, 0x00, 0x00,
    0x0C, 0x49, 0x44, 0x41, 0x54, 0x78, 0xDA, 0x63, 0xF8, 0xCF, 0xC0, 0x00,
    0x00, 0x03, 0x01, 0x01, 0x00, 0xF7, 0x03, 0x41, 0x43, 0x00, 0x00, 0x00,
    0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82,
};

void put_be32(std::vector<unsigned char>& v, uint32_t x) {
  v.push_back((x >> 24) & 0xFF);
  v.push_back((x >> 16) & 0xFF);
  v.push_back((x >> 8) & 0xFF);
  v.push_back(x & 0xFF);
}

void put_chunk(std::vector<unsigned char>& v, const char type[4],
               const std::vector<unsigned char>& payload) {
  put_be32(v, static_cast<uint32_t>(payload.size()));
  v.insert(v.end(), type, type + 4);
  v.insert(v.end(), payload.begin(), payload.end());
  uint32_t crc = static_cast<uint32_t>(
      crc32(crc32(0, reinterpret_cast<const Bytef*>(type), 4),
            payload.data(), static_cast<uInt>(payload.size())));
  put_be32(v, crc);
}

int paeth_ref(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

// Encodes 8-bit pixels as a PNG, forcing filter type (y % 5) on scanline y
// so the loader's unfiltering gets exercised on every branch.
std::vector<unsigned char> encode_png(const std::vector<unsigned char>& pixels, int w,
                                      int h, int channels) {
  const int bpp = channels;
  const size_t stride = static_cast<size_t>(w) * channels;
  std::vector<unsigned char> raw;
  for (int y = 0; y < h; ++y) {
    const int filter = y % 5;
    raw.push_back(static_cast<unsigned char>(filter));
    for (size_t i = 0; i < stride; ++i) {
      const int x = pixels[y * stride + i];
      const int a = i >= static_cast<size_t>(bpp) ? pixels[y * stride + i - bpp] : 0;
      const int b = y > 0 ? pixels[(y - 1) * stride + i] : 0;
      const int c = (y > 0 && i >= static_cast<size_t>(bpp))
                        ? pixels[(y - 1) * stride + i - bpp]
                        : 0;
      int enc = x;
      switch (filter) {
        case 1: enc = x - a; break;
        case 2: enc = x - b; break;
        case 3: enc = x - (a + b) / 2; break;
        case 4: enc = x - paeth_ref(a, b, c); break;
      }
      raw.push_back(static_cast<unsigned char>(enc & 0xFF));
    }
  }
  uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> comp(comp_size);
  REQUIRE(compress2(comp.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) ==
          Z_OK);
  comp.resize(comp_size);

  std::vector<unsigned char> png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  std::vector<unsigned char> ihdr;
  put_be32(ihdr, static_cast<uint32_t>(w));
  put_be32(ihdr, static_cast<uint32_t>(h));
  ihdr.push_back(8);                                   // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);               // color type
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", comp);
  put_chunk(png, "IEND", {});
  return png;
}

RasterImage random_image(int w, int h, int c, uint64_t seed) {
  RasterImage img(w, h, c);
  Rng rng(seed);
  for (double& v : img.data) v = rng.uniform();
  return img;
}

}  // namespace

TEST_CASE("load_image reads binary PGM endpoints") {
  const std::string path = temp_path("ptx_t_gray.pgm");
  const unsigned char file[] = {'P', '5', '\n', '2', ' ', '1', '\n', '2', '5', '5', '\n', 0, 255};
  write_bytes(path, file, sizeof(file));
  const RasterImage img = load_image(path);
  CHECK(img.width == 2);
  CHECK(img.height == 1);
  CHECK(img.channels == 1);
  CHECK(img.data[0] == doctest::Approx(0.0));
  CHECK(img.data[1] == doctest::Approx(1.0));
}

TEST_CASE("load_image reads binary PPM pure red") {
  const std::string path = temp_path("ptx_t_red.ppm");
  const unsigned char file[] = {'P', '6', '\n', '1', ' ', '1', '\n', '2', '5', '5', '\n',
                                255, 0, 0};
  write_bytes(path, file, sizeof(file));
  const RasterImage img = load_image(path);
  CHECK(img.channels == 3);
  CHECK(img.data[0] == doctest::Approx(1.0));
  CHECK(img.data[1] == doctest::Approx(0.0));
  CHECK(img.data[2] == doctest::Approx(0.0));
}

TEST_CASE("load_image rejects zero-width header") {
  const std::string path = temp_path("ptx_t_zero.pgm");
  const char file[] = "P5\n0 4\n255\n";
  write_bytes(path, file, sizeof(file) - 1);
  CHECK_THROWS(load_image(path));
}

TEST_CASE("load_image rejects missing files and unknown formats") {
  CHECK_THROWS(load_image(temp_path("ptx_t_does_not_exist.pgm")));
  const std::string path = temp_path("ptx_t_junk.img");
  const char file[] = "JUNKDATA";
  write_bytes(path, file, sizeof(file) - 1);
  CHECK_THROWS(load_image(path));
}

TEST_CASE("load_image reads 8-bit PNG (gray and RGB)") {
  const std::string gpath = temp_path("ptx_t_g.png");
  write_bytes(gpath, kPngGray2x1, sizeof(kPngGray2x1));
  const RasterImage g = load_image(gpath);
  CHECK(g.width == 2);
  CHECK(g.height == 1);
  CHECK(g.channels == 1);
  CHECK(g.data[0] == doctest::Approx(0.0));
  CHECK(g.data[1] == doctest::Approx(1.0));

  const std::string rpath = temp_path("ptx_t_r.png");
  write_bytes(rpath, kPngRed1x1, sizeof(kPngRed1x1));
  const RasterImage r = load_image(rpath);
  CHECK(r.channels == 3);
  CHECK(r.data[0] == doctest::Approx(1.0));
  CHECK(r.data[1] == doctest::Approx(0.0));
}

TEST_CASE("PNG unfiltering matches reference across all filter types") {
  Rng rng(99);
  for (int channels : {1, 3}) {
    const int w = 13, h = 10;
    std::vector<unsigned char> pixels(static_cast<size_t>(w) * h * channels);
    for (auto& b : pixels) b = static_cast<unsigned char>(rng.below(256));
    const auto png = encode_png(pixels, w, h, channels);
    const std::string path = temp_path("ptx_t_filters.png");
    write_bytes(path, png.data(), png.size());
    const RasterImage img = load_image(path);
    REQUIRE(img.width == w);
    REQUIRE(img.height == h);
    REQUIRE(img.channels == channels);
    for (size_t i = 0; i < pixels.size(); ++i) {
      CHECK(img.data[i] == doctest::Approx(pixels[i] / 255.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("save/load round-trip stays within 8-bit quantization") {
  for (int channels : {1, 3}) {
    const RasterImage img = random_image(9, 7, channels, 4242);
    const std::string path = temp_path(channels == 1 ? "ptx_t_rt.pgm" : "ptx_t_rt.ppm");
    save_image(img, path);
    const RasterImage back = load_image(path);
    REQUIRE(back.channels == channels);
    for (size_t i = 0; i < img.data.size(); ++i) {
      CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5 / 255.0 + 1e-12);
    }
  }
}

TEST_CASE("to_grayscale: identity on gray, BT.601 weights on color") {
  const RasterImage gray = random_image(5, 4, 1, 7);
  const RasterImage same = to_grayscale(gray);
  CHECK(same.data == gray.data);

  RasterImage white(1, 1, 3, 1.0);
  CHECK(to_grayscale(white).data[0] == doctest::Approx(1.0));

  RasterImage red(1, 1, 3, 0.0);
  red.data = {1.0, 0.0, 0.0};
  CHECK(to_grayscale(red).data[0] == doctest::Approx(0.299));
}

TEST_CASE("to_grayscale is idempotent") {
  const RasterImage img = random_image(6, 3, 3, 11);
  const RasterImage once = to_grayscale(img);
  const RasterImage twice = to_grayscale(once);
  CHECK(once.data == twice.data);
}

TEST_CASE("resize_bilinear: identity and constant preservation") {
  const RasterImage img = random_image(8, 5, 3, 21);
  const RasterImage same = resize_bilinear(img, 8, 5);
  for (size_t i = 0; i < img.data.size(); ++i) {
    CHECK(same.data[i] == doctest::Approx(img.data[i]).epsilon(1e-12));
  }

  const RasterImage constant(4, 4, 1, 0.37);
  const RasterImage up = resize_bilinear(constant, 9, 3);
  for (double v : up.data) CHECK(v == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("resize_bilinear half-pixel-center example 2x1 -> 4x1") {
  RasterImage img(2, 1, 1);
  img.data = {0.0, 1.0};
  const RasterImage out = resize_bilinear(img, 4, 1);
  REQUIRE(out.width == 4);
  CHECK(out.data[0] == doctest::Approx(0.0));
  CHECK(out.data[1] == doctest::Approx(0.25));
  CHECK(out.data[2] == doctest::Approx(0.75));
  CHECK(out.data[3] == doctest::Approx(1.0));
}

TEST_CASE("resize_bilinear output range is bounded by input range") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const RasterImage img = random_image(3 + static_cast<int>(rng.below(12)),
                                         3 + static_cast<int>(rng.below(12)), 1,
                                         1000 + trial);
    double lo = 1.0, hi = 0.0;
    for (double v : img.data) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const RasterImage out =
        resize_bilinear(img, 1 + static_cast<int>(rng.below(20)),
                        1 + static_cast<int>(rng.below(20)));
    for (double v : out.data) {
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("normalize_height preserves aspect ratio") {
  CHECK(normalize_height(RasterImage(120, 120, 1), 60).width == 60);
  CHECK(normalize_height(RasterImage(300, 100, 1), 60).width == 180);
  const RasterImage tiny = normalize_height(RasterImage(5, 200, 1), 60);
  CHECK(tiny.width == 2);
  CHECK(tiny.height == 60);
  CHECK_THROWS(normalize_height(RasterImage(5, 5, 1), 0));
}
