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

#include "ptx/pipeline.h"

#include <algorithm>
#include <stdexcept>

namespace ptx {

std::vector<CorpusFeatures> featurize_corpus(const Corpus& corpus, const RunConfig& cfg) {
  if (corpus.samples.empty()) throw std::invalid_argument("featurize_corpus: empty corpus");
  const FilterBank bank = default_bank();

  std::vector<GaussianPyramid> pyramids;
  pyramids.reserve(corpus.samples.size());
  int common_levels = kMaxPyramidLevels;
  for (const Sample& s : corpus.samples) {
    pyramids.push_back(build_pyramid(load_image(s.image_path), cfg.max_levels, cfg.min_height));
    common_levels = std::min(common_levels, pyramids.back().level_count());
  }
  if (cfg.level_limit > 0) common_levels = std::min(common_levels, cfg.level_limit);

  std::vector<CorpusFeatures> out;
  if (cfg.mode == FeatureMode::per_level) {
    out.resize(common_levels);
    for (int k = 0; k < common_levels; ++k) {
      out[k].level = k;
      out[k].seqs.reserve(pyramids.size());
      for (const GaussianPyramid& pyr : pyramids) {
        FeatureSequence seq = featurize_level(pyr.levels[k], bank, cfg.xheight);
        seq.source_level = k;
        out[k].seqs.push_back(std::move(seq));
      }
    }
  } else {
    out.resize(1);
    out[0].level = -1;
    out[0].seqs.reserve(pyramids.size());
    for (GaussianPyramid& pyr : pyramids) {
      pyr.levels.resize(common_levels);  // identical feature width for every sample
      out[0].seqs.push_back(
          featurize_pyramid(pyr, bank, cfg.xheight, FeatureMode::whole).front());
    }
  }
  return out;
}

std::vector<TrainSample> gather_samples(const CorpusFeatures& features,
                                        const Corpus& corpus,
                                        const std::vector<size_t>& indices) {
  std::vector<TrainSample> out;
  out.reserve(indices.size());
  for (size_t i : indices) {
    out.push_back({features.seqs[i], corpus.alphabet.encode(corpus.samples[i].transcription)});
  }
  return out;
}

FeatureSequence featurize_for_model(const SequenceModel& model, const RasterImage& img) {
  const FeatureConfig& fc = model.feature_config;
  const FilterBank bank = default_bank();
  GaussianPyramid pyr = build_pyramid(img, fc.max_levels, fc.min_height);

  if (fc.mode == FeatureMode::per_level) {
    if (fc.level >= pyr.level_count()) {
      throw std::runtime_error("image pyramid has no level " + std::to_string(fc.level));
    }
    return featurize_level(pyr.levels[fc.level], bank, fc.xheight);
  }

  const int levels_needed = model.cell_channels / kBankPlaneCount;
  if (pyr.level_count() < levels_needed) {
    throw std::runtime_error("image pyramid has only " +
                             std::to_string(pyr.level_count()) + " levels, model needs " +
                             std::to_string(levels_needed));
  }
  pyr.levels.resize(levels_needed);
  return featurize_pyramid(pyr, bank, fc.xheight, FeatureMode::whole).front();
}

TrainedModel train_one(const Corpus& corpus, const CorpusFeatures& features,
                       const RunConfig& cfg, uint64_t seed) {
  const std::vector<TrainSample> train_set =
      gather_samples(features, corpus, corpus.train_idx);
  const std::vector<TrainSample> val_set = gather_samples(features, corpus, corpus.val_idx);
  if (train_set.empty()) throw std::runtime_error("train_one: empty training split");

  const FeatureSequence& probe = train_set.front().features;
  TrainedModel out{
      init_model(cfg.kind, probe.frame_dim, cfg.hidden_units, corpus.alphabet, seed,
                 cfg.kind == ModelKind::mdlstm_2d ? probe.channel_count : 0),
      {}};
  out.model.feature_config.xheight = cfg.xheight;
  out.model.feature_config.mode = cfg.mode;
  out.model.feature_config.level = features.level;
  out.model.feature_config.max_levels = cfg.max_levels;
  out.model.feature_config.min_height = cfg.min_height;

  TrainConfig tc = cfg.train;
  tc.shuffle_seed = seed;
  out.log = train(out.model, train_set, val_set, tc);
  return out;
}

}  // namespace ptx
