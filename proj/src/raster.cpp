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

#include "ptx/raster.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace ptx {

// Defined in png_inflate.cpp.
std::vector<unsigned char> zlib_inflate(const std::vector<unsigned char>& in,
                                        size_t expected, const std::string& path);

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

// Reads the next PNM header token, skipping whitespace and # comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(in.get()));
      }
      return tok;
    }
  }
  return tok;
}

int pnm_int(std::istream& in, const std::string& path) {
  const std::string tok = pnm_token(in);
  if (tok.empty()) fail(path, "truncated header");
  try {
    return std::stoi(tok);
  } catch (const std::exception&) {
    fail(path, "bad header field '" + tok + "'");
  }
}

RasterImage load_pnm(std::ifstream& in, const std::string& path, int channels) {
  const int w = pnm_int(in, path);
  const int h = pnm_int(in, path);
  const int maxval = pnm_int(in, path);
  if (w <= 0 || h <= 0) fail(path, "non-positive dimensions");
  if (maxval != 255) fail(path, "unsupported max value (want 255)");
  in.get();  // single whitespace after maxval
  const size_t n = static_cast<size_t>(w) * h * channels;
  std::vector<unsigned char> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) fail(path, "truncated pixel data");
  RasterImage img(w, h, channels);
  for (size_t i = 0; i < n; ++i) img.data[i] = raw[i] / 255.0;
  return img;
}

// --- minimal PNG reader: 8-bit gray/RGB, no interlace ---

uint32_t be32(const unsigned char* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | p[3];
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

RasterImage load_png(std::ifstream& in, const std::string& path) {
  static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  unsigned char hdr[8];
  in.read(reinterpret_cast<char*>(hdr), 8);
  if (in.gcount() != 8 || !std::equal(sig, sig + 8, hdr)) fail(path, "bad PNG signature");

  int w = 0, h = 0, channels = 0;
  std::vector<unsigned char> idat;
  bool saw_ihdr = false, saw_iend = false;
  while (!saw_iend) {
    unsigned char chunk_hdr[8];
    in.read(reinterpret_cast<char*>(chunk_hdr), 8);
    if (in.gcount() != 8) fail(path, "truncated PNG chunk");
    const uint32_t len = be32(chunk_hdr);
    const std::string type(reinterpret_cast<char*>(chunk_hdr) + 4, 4);
    std::vector<unsigned char> payload(len);
    if (len > 0) {
      in.read(reinterpret_cast<char*>(payload.data()), len);
      if (static_cast<uint32_t>(in.gcount()) != len) fail(path, "truncated PNG chunk data");
    }
    in.ignore(4);  // CRC

    if (type == "IHDR") {
      if (len != 13) fail(path, "bad IHDR length");
      w = static_cast<int>(be32(payload.data()));
      h = static_cast<int>(be32(payload.data() + 4));
      const int depth = payload[8], color = payload[9];
      const int interlace = payload[12];
      if (w <= 0 || h <= 0) fail(path, "non-positive dimensions");
      if (depth != 8) fail(path, "unsupported PNG bit depth (want 8)");
      if (color == 0) channels = 1;
      else if (color == 2) channels = 3;
      else fail(path, "unsupported PNG color type (want gray or RGB)");
      if (interlace != 0) fail(path, "interlaced PNG not supported");
      saw_ihdr = true;
    } else if (type == "IDAT") {
      idat.insert(idat.end(), payload.begin(), payload.end());
    } else if (type == "IEND") {
      saw_iend = true;
    }
    // ancillary chunks are skipped
  }
  if (!saw_ihdr || idat.empty()) fail(path, "missing PNG image data");

  const size_t stride = static_cast<size_t>(w) * channels;
  const size_t raw_size = (stride + 1) * h;
  std::vector<unsigned char> raw = zlib_inflate(idat, raw_size, path);
  if (raw.size() != raw_size) fail(path, "unexpected PNG data size");

  RasterImage img(w, h, channels);
  std::vector<unsigned char> prev(stride, 0), cur(stride, 0);
  const int bpp = channels;  // bytes per pixel at depth 8
  for (int y = 0; y < h; ++y) {
    const unsigned char* line = raw.data() + static_cast<size_t>(y) * (stride + 1);
    const int filter = line[0];
    for (size_t i = 0; i < stride; ++i) {
      const int x = line[1 + i];
      const int a = i >= static_cast<size_t>(bpp) ? cur[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= static_cast<size_t>(bpp) ? prev[i - bpp] : 0;
      int v;
      switch (filter) {
        case 0: v = x; break;
        case 1: v = x + a; break;
        case 2: v = x + b; break;
        case 3: v = x + (a + b) / 2; break;
        case 4: v = x + paeth(a, b, c); break;
        default: fail(path, "bad PNG filter type");
      }
      cur[i] = static_cast<unsigned char>(v & 0xFF);
    }
    for (size_t i = 0; i < stride; ++i) {
      img.data[static_cast<size_t>(y) * stride + i] = cur[i] / 255.0;
    }
    std::swap(cur, prev);
  }
  return img;
}

}  // namespace

RasterImage load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  const int c0 = in.get();
  const int c1 = in.get();
  if (c0 == 'P' && c1 == '5') return load_pnm(in, path, 1);
  if (c0 == 'P' && c1 == '6') return load_pnm(in, path, 3);
  if (c0 == 0x89 && c1 == 'P') {
    in.seekg(0);
    return load_png(in, path);
  }
  fail(path, "unsupported image format");
}

void save_image(const RasterImage& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3) {
    throw std::invalid_argument("save_image: channels must be 1 or 3");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) {
    const double v = std::clamp(img.data[i], 0.0, 1.0);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) fail(path, "write failed");
}

RasterImage to_grayscale(const RasterImage& img) {
  if (img.channels == 1) return img;
  if (img.channels != 3) throw std::invalid_argument("to_grayscale: channels must be 1 or 3");
  RasterImage out(img.width, img.height, 1);
  for (size_t p = 0; p < img.pixel_count(); ++p) {
    const double r = img.data[p * 3], g = img.data[p * 3 + 1], b = img.data[p * 3 + 2];
    out.data[p] = 0.299 * r + 0.587 * g + 0.114 * b;
  }
  return out;
}

namespace {

// Shared bilinear kernel over one channel; no range clamping.
template <typename GetSrc>
void bilinear_channel(int in_w, int in_h, int out_w, int out_h,
                      const GetSrc& src, double* dst) {
  const double sx = static_cast<double>(in_w) / out_w;
  const double sy = static_cast<double>(in_h) / out_h;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(in_h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, in_h - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(in_w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, in_w - 1);
      const double wx = fx - x0;
      const double top = (1.0 - wx) * src(x0, y0) + wx * src(x1, y0);
      const double bot = (1.0 - wx) * src(x0, y1) + wx * src(x1, y1);
      dst[static_cast<size_t>(y) * out_w + x] = (1.0 - wy) * top + wy * bot;
    }
  }
}

}  // namespace

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resize_bilinear: target must be >= 1x1");
  RasterImage out(out_w, out_h, img.channels);
  std::vector<double> plane(static_cast<size_t>(out_w) * out_h);
  for (int c = 0; c < img.channels; ++c) {
    bilinear_channel(
        img.width, img.height, out_w, out_h,
        [&](int x, int y) { return img.at(x, y, c); }, plane.data());
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        out.at(x, y, c) = std::clamp(plane[static_cast<size_t>(y) * out_w + x], 0.0, 1.0);
      }
    }
  }
  return out;
}

FilteredPlane resize_bilinear_plane(const FilteredPlane& plane, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resize_bilinear: target must be >= 1x1");
  FilteredPlane out(out_w, out_h);
  bilinear_channel(
      plane.width, plane.height, out_w, out_h,
      [&](int x, int y) { return plane.at(x, y); }, out.data.data());
  return out;
}

RasterImage normalize_height(const RasterImage& img, int target_h) {
  if (target_h < 1) throw std::invalid_argument("normalize_height: target must be >= 1");
  const double scale = static_cast<double>(target_h) / img.height;
  const int out_w = std::max(1, static_cast<int>(std::lround(img.width * scale)));
  return resize_bilinear(img, out_w, target_h);
}

}  // namespace ptx
