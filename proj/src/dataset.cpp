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

#include "ptx/dataset.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ptx/utf8.h"

namespace fs = std::filesystem;

namespace ptx {

std::vector<Sample> parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open manifest");
  const fs::path base = fs::path(path).parent_path();

  std::vector<Sample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": missing TAB separator");
    }
    const std::string rel = line.substr(0, tab);
    const std::string text = line.substr(tab + 1);
    if (rel.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty image path");
    }
    if (text.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty transcription");
    }
    Sample s;
    s.image_path = (base / rel).string();
    s.transcription = decode_utf8(text);
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_manifest(const std::vector<Sample>& samples, const std::string& path,
                    const std::string& base_dir) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  for (const Sample& s : samples) {
    const std::string rel = fs::relative(s.image_path, base_dir).generic_string();
    out << rel << "\t" << encode_utf8(s.transcription) << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

Alphabet build_alphabet(const std::vector<Sample>& samples) {
  if (samples.empty()) throw std::invalid_argument("build_alphabet: no samples");
  std::set<uint32_t> cps;
  for (const Sample& s : samples) cps.insert(s.transcription.begin(), s.transcription.end());
  return Alphabet(std::vector<uint32_t>(cps.begin(), cps.end()));
}

Corpus split_corpus(std::vector<Sample> samples, const SplitRatios& ratios, uint64_t seed) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0) {
    throw std::invalid_argument("split_corpus: negative ratio");
  }
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_corpus: ratios must sum to 1");
  }
  if (samples.empty()) throw std::invalid_argument("split_corpus: no samples");

  const size_t n = samples.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  Rng rng(seed);
  rng.shuffle(idx);

  size_t n_train = static_cast<size_t>(std::lround(n * ratios.train));
  size_t n_val = static_cast<size_t>(std::lround(n * ratios.validation));
  n_train = std::min(n_train, n);
  n_val = std::min(n_val, n - n_train);
  const size_t n_test = n - n_train - n_val;

  const int positive_splits = (ratios.train > 0) + (ratios.validation > 0) + (ratios.test > 0);
  if (n >= static_cast<size_t>(positive_splits)) {
    if ((ratios.train > 0 && n_train == 0) || (ratios.validation > 0 && n_val == 0) ||
        (ratios.test > 0 && n_test == 0)) {
      throw std::runtime_error("split_corpus: a positive-ratio split received no samples");
    }
  }

  Corpus corpus;
  corpus.alphabet = build_alphabet(samples);
  corpus.samples = std::move(samples);
  corpus.train_idx.assign(idx.begin(), idx.begin() + n_train);
  corpus.val_idx.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  corpus.test_idx.assign(idx.begin() + n_train + n_val, idx.end());
  return corpus;
}

// ---- synthetic generation ----

std::vector<RasterImage> make_glyphs(int count, Rng& rng) {
  std::vector<RasterImage> glyphs;
  glyphs.reserve(count);
  const int n = kGlyphCell;
  for (int g = 0; g < count; ++g) {
    RasterImage mask(n, n, 1, 0.0);
    std::vector<std::pair<int, int>> inked;

    auto stamp = [&](int cx, int cy) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = cx + dx, y = cy + dy;
          if (x >= 0 && x < n && y >= 0 && y < n && mask.at(x, y) == 0.0) {
            mask.at(x, y) = 1.0;
            inked.emplace_back(x, y);
          }
        }
      }
    };

    const int strokes = rng.range_int(2, 4);
    for (int s = 0; s < strokes; ++s) {
      int x, y;
      if (inked.empty()) {
        x = rng.range_int(n / 4, 3 * n / 4);
        y = rng.range_int(n / 4, 3 * n / 4);
      } else {
        // start on already-inked ground so the pattern stays connected
        const auto& p = inked[rng.below(inked.size())];
        x = p.first;
        y = p.second;
      }
      int dx = rng.range_int(-1, 1), dy = rng.range_int(-1, 1);
      if (dx == 0 && dy == 0) dx = 1;
      const int steps = rng.range_int(8, 16);
      for (int k = 0; k < steps; ++k) {
        stamp(x, y);
        // mostly keep heading, occasionally turn
        if (rng.uniform() < 0.3) {
          dx = rng.range_int(-1, 1);
          dy = rng.range_int(-1, 1);
          if (dx == 0 && dy == 0) dy = -1;
        }
        x = std::clamp(x + dx, 1, n - 2);
        y = std::clamp(y + dy, 1, n - 2);
      }
    }
    glyphs.push_back(std::move(mask));
  }
  return glyphs;
}

RasterImage compose_line(const std::vector<RasterImage>& glyphs,
                         const std::vector<int>& glyph_seq, double noise_level, Rng& rng) {
  if (glyph_seq.empty()) throw std::invalid_argument("compose_line: empty glyph sequence");
  const int margin = 4;
  const int jitter = 2;
  const double background = 0.8, ink = 0.12;

  std::vector<int> jitters(glyph_seq.size()), spacings(glyph_seq.size(), 0);
  int width = 2 * margin;
  for (size_t i = 0; i < glyph_seq.size(); ++i) {
    jitters[i] = rng.range_int(-jitter, jitter);
    if (i > 0) spacings[i] = rng.range_int(0, 4);
    width += kGlyphCell + spacings[i];
  }
  const int height = kGlyphCell + 2 * (margin + jitter) - 4;

  RasterImage line(width, height, 1, background);
  // glyph_seq[0] goes rightmost; later glyphs extend leftward
  int right = width - margin;
  for (size_t i = 0; i < glyph_seq.size(); ++i) {
    right -= spacings[i];
    const int x0 = right - kGlyphCell;
    const int y0 = margin + jitters[i];
    const RasterImage& mask = glyphs.at(glyph_seq[i]);
    for (int y = 0; y < kGlyphCell; ++y) {
      for (int x = 0; x < kGlyphCell; ++x) {
        if (mask.at(x, y) > 0.5) line.at(x0 + x, y0 + y) = ink;
      }
    }
    right = x0;
  }

  if (noise_level > 0) {
    for (double& v : line.data) {
      v = std::clamp(v + noise_level * rng.gaussian(), 0.0, 1.0);
    }
  }
  return line;
}

std::string synth_generate(const SynthConfig& cfg, const std::string& out_dir) {
  if (cfg.glyph_count < 2 || cfg.glyph_count > 40) {
    throw std::invalid_argument("synth_generate: glyph_count must be in [2,40]");
  }
  if (cfg.line_count < 1) throw std::invalid_argument("synth_generate: line_count must be >= 1");
  if (cfg.min_len < 1 || cfg.max_len < cfg.min_len) {
    throw std::invalid_argument("synth_generate: bad line length range");
  }

  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "images", ec);
  if (ec) throw std::runtime_error(out_dir + ": cannot create output directory");

  Rng rng(cfg.seed);
  const std::vector<RasterImage> glyphs = make_glyphs(cfg.glyph_count, rng);

  std::vector<Sample> samples;
  samples.reserve(cfg.line_count);
  for (int i = 0; i < cfg.line_count; ++i) {
    const int len = rng.range_int(cfg.min_len, cfg.max_len);
    std::vector<int> seq(len);
    std::vector<uint32_t> text(len);
    for (int k = 0; k < len; ++k) {
      seq[k] = static_cast<int>(rng.below(cfg.glyph_count));
      text[k] = kGlyphBase + static_cast<uint32_t>(seq[k]);
    }
    const RasterImage img = compose_line(glyphs, seq, cfg.noise_level, rng);

    char name[32];
    std::snprintf(name, sizeof(name), "line_%04d.pgm", i);
    const std::string img_path = (fs::path(out_dir) / "images" / name).string();
    save_image(img, img_path);
    samples.push_back({img_path, text});
  }

  const std::string manifest_path = (fs::path(out_dir) / "MANIFEST.tsv").string();
  write_manifest(samples, manifest_path, out_dir);

  std::ofstream meta((fs::path(out_dir) / "meta.txt").string(), std::ios::binary);
  if (!meta) throw std::runtime_error(out_dir + ": cannot write meta.txt");
  meta << "glyph_count=" << cfg.glyph_count << "\n"
       << "line_count=" << cfg.line_count << "\n"
       << "min_len=" << cfg.min_len << "\n"
       << "max_len=" << cfg.max_len << "\n"
       << "noise_level=" << cfg.noise_level << "\n"
       << "seed=" << cfg.seed << "\n";
  return manifest_path;
}

}  // namespace ptx
