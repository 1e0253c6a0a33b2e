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

#ifndef PYRATEXT_DATASET_H_
#define PYRATEXT_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ptx/alphabet.h"
#include "ptx/raster.h"
#include "ptx/rng.h"

namespace ptx {

struct Sample {
  std::string image_path;               // resolved path
  std::vector<uint32_t> transcription;  // logical order codepoints, non-empty
};

// TSV manifest: `<image-path><TAB><transcription>` per line, `#` comments.
// Image paths are resolved relative to the manifest's directory.
std::vector<Sample> parse_manifest(const std::string& path);
void write_manifest(const std::vector<Sample>& samples, const std::string& path,
                    const std::string& base_dir);

// Sorted unique codepoints across all transcriptions; blank at index 0.
Alphabet build_alphabet(const std::vector<Sample>& samples);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct Corpus {
  std::vector<Sample> samples;
  Alphabet alphabet;
  std::vector<size_t> train_idx, val_idx, test_idx;
};

// Seeded shuffle then contiguous partition. Ratios must be non-negative and
// sum to 1 (1e-9 tolerance); a positive-ratio split must receive at least one
// sample when the corpus has enough samples to go around.
Corpus split_corpus(std::vector<Sample> samples, const SplitRatios& ratios, uint64_t seed);

// ---- synthetic corpus generation (EASTR-42k stand-in) ----

inline constexpr int kGlyphCell = 32;          // glyph bitmap side
inline constexpr uint32_t kGlyphBase = 0xE000; // private-use codepoints

struct SynthConfig {
  int glyph_count = 10;  // in [2, 40]
  int line_count = 20;
  int min_len = 3;
  int max_len = 8;
  double noise_level = 0.02;  // Gaussian pixel noise stddev
  uint64_t seed = 1;
};

// Random connected stroke patterns on a kGlyphCell square; values are an ink
// mask in {0,1}.
std::vector<RasterImage> make_glyphs(int count, Rng& rng);

// Concatenates glyphs right-to-left (glyph_seq[0] ends up rightmost) with
// +/-2 px vertical jitter and 0-4 px spacing on a gray background, then adds
// Gaussian noise clamped to [0,1].
RasterImage compose_line(const std::vector<RasterImage>& glyphs,
                         const std::vector<int>& glyph_seq, double noise_level, Rng& rng);

// Writes PGM line images, MANIFEST.tsv and meta.txt under out_dir; returns
// the manifest path. Bit-identical output for identical arguments.
std::string synth_generate(const SynthConfig& cfg, const std::string& out_dir);

}  // namespace ptx

#endif  // PYRATEXT_DATASET_H_
