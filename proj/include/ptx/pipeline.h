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

#ifndef PYRATEXT_PIPELINE_H_
#define PYRATEXT_PIPELINE_H_

#include <string>
#include <vector>

#include "ptx/dataset.h"
#include "ptx/filter_bank.h"
#include "ptx/pyramid.h"
#include "ptx/seqmodel.h"
#include "ptx/train.h"

namespace ptx {

// Everything a reproducible run needs; defaults are the pipeline's standard
// operating point.
struct RunConfig {
  int xheight = kDefaultXHeight;
  int max_levels = kMaxPyramidLevels;
  int min_height = kDefaultMinHeight;
  FeatureMode mode = FeatureMode::per_level;
  int level_limit = -1;  // cap on featurized levels, -1 = all available

  ModelKind kind = ModelKind::blstm_1d;
  int hidden_units = 100;
  std::vector<uint64_t> seeds = {1};
  TrainConfig train;

  SplitRatios ratios;
  uint64_t split_seed = 1;
};

// Feature sequences for every corpus sample at one pyramid level
// (level = -1 for a whole-pyramid run).
struct CorpusFeatures {
  int level = 0;
  std::vector<FeatureSequence> seqs;  // aligned with Corpus::samples
};

// Loads every image, builds its pyramid and featurizes. In per_level mode
// returns one entry per level common to all samples (capped by level_limit);
// in whole mode a single entry built on pyramids truncated to the common
// level count.
std::vector<CorpusFeatures> featurize_corpus(const Corpus& corpus, const RunConfig& cfg);

// Pairs features with encoded labels for the given split indices.
std::vector<TrainSample> gather_samples(const CorpusFeatures& features,
                                        const Corpus& corpus,
                                        const std::vector<size_t>& indices);

// Featurizes one image the way the model's inputs were produced.
FeatureSequence featurize_for_model(const SequenceModel& model, const RasterImage& img);

// Trains one model on the given features/split and returns it with its log.
struct TrainedModel {
  SequenceModel model;
  TrainLog log;
};
TrainedModel train_one(const Corpus& corpus, const CorpusFeatures& features,
                       const RunConfig& cfg, uint64_t seed);

}  // namespace ptx

#endif  // PYRATEXT_PIPELINE_H_
