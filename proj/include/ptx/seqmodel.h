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

#ifndef PYRATEXT_SEQMODEL_H_
#define PYRATEXT_SEQMODEL_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptx/alphabet.h"
#include "ptx/filter_bank.h"

namespace ptx {

enum class ModelKind { blstm_1d, mdlstm_2d };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);
std::string to_string(FeatureMode mode);
FeatureMode feature_mode_from_string(const std::string& s);

// Optimizer settings; stored in the model header so every result is
// attributable to its exact configuration.
struct TrainConfig {
  double learning_rate = 1e-4;
  double momentum = 0.9;
  int max_epochs = 200;
  int patience = 20;       // early-stop patience on validation label error
  uint64_t shuffle_seed = 1;
};

// How the model's input sequences were produced; stored in the model header
// so `recognize` can featurize a fresh image the same way.
struct FeatureConfig {
  int xheight = kDefaultXHeight;
  FeatureMode mode = FeatureMode::per_level;
  int level = 0;  // pyramid level consumed in per_level mode
  int max_levels = kMaxPyramidLevels;
  int min_height = kDefaultMinHeight;
};

// Recurrent recognizer over FeatureSequence inputs with a CTC output layer.
//
// Parameters live in one flat column-major buffer. Layout, in order:
//
// blstm_1d (gate blocks i,f,g,o stacked along rows):
//   per direction d in {forward, backward}:
//     Wx_d [4H x D], Wh_d [4H x H], b_d [4H]
//   Wout_fwd [K x H], Wout_bwd [K x H], b_out [K]
//
// mdlstm_2d (gate blocks i,f_t,f_y,g,o; C = cell_channels, per-cell input):
//   per scan pass p in {(+t,+y), (-t,+y), (+t,-y), (-t,-y)}:
//     Wx_p [5H x C], Ut_p [5H x H], Uy_p [5H x H], b_p [5H]
//   Wout_p [K x H] for the four passes, b_out [K]
struct SequenceModel {
  ModelKind kind = ModelKind::blstm_1d;
  int input_dim = 0;      // D, the frame dimension
  int hidden_units = 0;   // H per direction / per scan pass
  int cell_channels = 0;  // mdlstm_2d: planes per frame; D = cell_channels * frame height
  Alphabet alphabet;
  uint64_t rng_seed = 0;
  TrainConfig train_config;
  FeatureConfig feature_config;
  std::vector<double> params;

  int output_dim() const { return alphabet.size(); }
  int frame_height() const { return cell_channels > 0 ? input_dim / cell_channels : 0; }
};

// Number of parameters implied by the shape fields.
size_t param_count(ModelKind kind, int input_dim, int hidden_units, int output_dim,
                   int cell_channels);

// Offset of the output projection block (Wout.., b_out) inside params.
size_t output_block_offset(const SequenceModel& model);

// Weights uniform in [-0.1, 0.1] from the seed, biases zero except forget
// gates at +1. cell_channels is required for mdlstm_2d (must divide D) and
// ignored for blstm_1d.
SequenceModel init_model(ModelKind kind, int input_dim, int hidden_units,
                         const Alphabet& alphabet, uint64_t seed,
                         int cell_channels = 0);

// Per-frame class posteriors, one row per frame; rows sum to 1.
Eigen::MatrixXd forward(const SequenceModel& model, const FeatureSequence& seq);

// Loss plus the analytic gradient of ctc_loss(forward(.)) with respect to
// every parameter, in params order. Used by training and gradient checking.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};
LossGrad loss_and_gradients(const SequenceModel& model, const FeatureSequence& seq,
                            const std::vector<int>& label);

// PTXM1 container: magic, structured-text header, then the parameter buffer
// as f64-LE in params order.
void save_model(const SequenceModel& model, const std::string& path);
SequenceModel load_model(const std::string& path);

}  // namespace ptx

#endif  // PYRATEXT_SEQMODEL_H_
