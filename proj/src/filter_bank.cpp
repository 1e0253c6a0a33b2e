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

#include "ptx/filter_bank.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ptx {

namespace {

Kernel make_kernel(const std::string& name, int rows, int cols,
                   std::vector<double> coeffs) {
  return Kernel{rows, cols, std::move(coeffs), name};
}

}  // namespace

FilterBank default_bank() {
  FilterBank bank;
  bank.kernels.push_back(make_kernel("laplacian", 3, 3,
                                     {0, 1, 0,
                                      1, -4, 1,
                                      0, 1, 0}));
  bank.kernels.push_back(make_kernel("sobel_x", 3, 3,
                                     {-1, 0, 1,
                                      -2, 0, 2,
                                      -1, 0, 1}));
  bank.kernels.push_back(make_kernel("sobel_y", 3, 3,
                                     {-1, -2, -1,
                                      0, 0, 0,
                                      1, 2, 1}));
  bank.kernels.push_back(make_kernel("small_blur", 3, 3, std::vector<double>(9, 1.0 / 9)));
  bank.kernels.push_back(make_kernel("large_blur", 5, 5, std::vector<double>(25, 1.0 / 25)));
  bank.kernels.push_back(make_kernel("sharpen", 3, 3,
                                     {0, -1, 0,
                                      -1, 5, -1,
                                      0, -1, 0}));
  return bank;
}

FilteredPlane convolve2d(const FilteredPlane& plane, const Kernel& k) {
  if (k.rows % 2 == 0 || k.cols % 2 == 0) {
    throw std::invalid_argument("convolve2d: kernel dimensions must be odd");
  }
  if (plane.width < 1 || plane.height < 1) {
    throw std::invalid_argument("convolve2d: empty plane");
  }
  const int w = plane.width, h = plane.height;
  const int hr = k.rows / 2, hc = k.cols / 2;
  FilteredPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int r = -hr; r <= hr; ++r) {
        const int yy = std::clamp(y + r, 0, h - 1);
        for (int c = -hc; c <= hc; ++c) {
          const int xx = std::clamp(x + c, 0, w - 1);
          acc += k.at(r + hr, c + hc) * plane.at(xx, yy);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

FilteredPlane convolve2d(const RasterImage& img, const Kernel& k) {
  if (img.channels != 1) {
    throw std::invalid_argument("convolve2d: raster input must be 1-channel");
  }
  FilteredPlane plane(img.width, img.height);
  plane.data = img.data;
  return convolve2d(plane, k);
}

std::vector<FilteredPlane> apply_bank(const RasterImage& img, const FilterBank& bank) {
  const RasterImage gray = to_grayscale(img);
  FilteredPlane base(gray.width, gray.height);
  base.data = gray.data;
  std::vector<FilteredPlane> planes;
  planes.reserve(bank.kernels.size() + 1);
  planes.push_back(base);
  for (const Kernel& k : bank.kernels) {
    planes.push_back(convolve2d(base, k));
  }
  return planes;
}

namespace {

// Columns of the resized planes, emitted right-to-left, plane-major within
// a frame; then per-dimension standardization.
FeatureSequence serialize_planes(const std::vector<FilteredPlane>& resized,
                                 int xheight, int out_w, int source_level) {
  const int planes = static_cast<int>(resized.size());
  FeatureSequence seq;
  seq.frame_count = out_w;
  seq.frame_dim = planes * xheight;
  seq.frames.assign(static_cast<size_t>(seq.frame_count) * seq.frame_dim, 0.0);
  seq.source_level = source_level;
  seq.channel_count = planes;
  seq.frame_height = xheight;

  for (int t = 0; t < out_w; ++t) {
    const int x = out_w - 1 - t;  // rightmost column first
    for (int p = 0; p < planes; ++p) {
      for (int y = 0; y < xheight; ++y) {
        seq.at(t, p * xheight + y) = resized[p].at(x, y);
      }
    }
  }

  const double kVarFloor = 1e-8;
  for (int d = 0; d < seq.frame_dim; ++d) {
    double mean = 0.0;
    for (int t = 0; t < seq.frame_count; ++t) mean += seq.at(t, d);
    mean /= seq.frame_count;
    double var = 0.0;
    for (int t = 0; t < seq.frame_count; ++t) {
      const double dv = seq.at(t, d) - mean;
      var += dv * dv;
    }
    var /= seq.frame_count;
    const double inv_sd = 1.0 / std::sqrt(std::max(var, kVarFloor));
    for (int t = 0; t < seq.frame_count; ++t) {
      seq.at(t, d) = (seq.at(t, d) - mean) * inv_sd;
    }
  }
  return seq;
}

int normalized_width(const RasterImage& img, int xheight) {
  const double scale = static_cast<double>(xheight) / img.height;
  return std::max(1, static_cast<int>(std::lround(img.width * scale)));
}

}  // namespace

FeatureSequence featurize_level(const RasterImage& level, const FilterBank& bank,
                                int xheight) {
  if (xheight < 1) throw std::invalid_argument("featurize_level: xheight must be >= 1");
  const int out_w = normalized_width(level, xheight);
  std::vector<FilteredPlane> planes = apply_bank(level, bank);
  std::vector<FilteredPlane> resized;
  resized.reserve(planes.size());
  for (const FilteredPlane& p : planes) {
    resized.push_back(resize_bilinear_plane(p, out_w, xheight));
  }
  return serialize_planes(resized, xheight, out_w, 0);
}

std::vector<FeatureSequence> featurize_pyramid(const GaussianPyramid& pyr,
                                               const FilterBank& bank, int xheight,
                                               FeatureMode mode) {
  if (pyr.levels.empty()) throw std::invalid_argument("featurize_pyramid: empty pyramid");
  if (xheight < 1) throw std::invalid_argument("featurize_pyramid: xheight must be >= 1");

  std::vector<FeatureSequence> out;
  if (mode == FeatureMode::per_level) {
    out.reserve(pyr.levels.size());
    for (int k = 0; k < pyr.level_count(); ++k) {
      FeatureSequence seq = featurize_level(pyr.levels[k], bank, xheight);
      seq.source_level = k;
      out.push_back(std::move(seq));
    }
    return out;
  }

  // whole: every level's planes land on the base level's grid.
  const int out_w = normalized_width(pyr.base(), xheight);
  std::vector<FilteredPlane> resized;
  resized.reserve(static_cast<size_t>(pyr.level_count()) * kBankPlaneCount);
  for (const RasterImage& level : pyr.levels) {
    for (const FilteredPlane& p : apply_bank(level, bank)) {
      resized.push_back(resize_bilinear_plane(p, out_w, xheight));
    }
  }
  out.push_back(serialize_planes(resized, xheight, out_w, 0));
  return out;
}

namespace {

void put_u32le(std::ostream& out, uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                              static_cast<unsigned char>((v >> 8) & 0xFF),
                              static_cast<unsigned char>((v >> 16) & 0xFF),
                              static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32le(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw std::runtime_error(path + ": truncated feature file");
  return uint32_t(b[0]) | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16) |
         (uint32_t(b[3]) << 24);
}

void put_f64le(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64le(std::istream& in, const std::string& path) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (in.gcount() != 8) throw std::runtime_error(path + ": truncated feature file");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

constexpr char kFseqMagic[] = "FSEQ1";

}  // namespace

void save_feature_sequence(const FeatureSequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(kFseqMagic, 5);
  put_u32le(out, static_cast<uint32_t>(seq.frame_count));
  put_u32le(out, static_cast<uint32_t>(seq.frame_dim));
  for (double v : seq.frames) put_f64le(out, v);
  if (!out) throw std::runtime_error(path + ": write failed");
}

FeatureSequence load_feature_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  char magic[5];
  in.read(magic, 5);
  if (in.gcount() != 5 || std::memcmp(magic, kFseqMagic, 5) != 0) {
    throw std::runtime_error(path + ": not an FSEQ1 file");
  }
  FeatureSequence seq;
  seq.frame_count = static_cast<int>(get_u32le(in, path));
  seq.frame_dim = static_cast<int>(get_u32le(in, path));
  if (seq.frame_count < 1 || seq.frame_dim < 1) {
    throw std::runtime_error(path + ": bad feature dimensions");
  }
  seq.frames.resize(static_cast<size_t>(seq.frame_count) * seq.frame_dim);
  for (double& v : seq.frames) v = get_f64le(in, path);
  return seq;
}

}  // namespace ptx
