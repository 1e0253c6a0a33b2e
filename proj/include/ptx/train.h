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

#ifndef PYRATEXT_TRAIN_H_
#define PYRATEXT_TRAIN_H_

#include <vector>

#include "ptx/seqmodel.h"

namespace ptx {

struct TrainSample {
  FeatureSequence features;
  std::vector<int> label;  // alphabet symbol indices (>= 1)
};

struct EpochStats {
  int epoch = 0;              // 1-based
  double train_loss = 0;      // mean CTC loss over the epoch
  double val_label_error = 0; // CER on the validation set
  double val_seq_accuracy = 0;// exact-match fraction on the validation set
};

struct TrainLog {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;
  double best_val_error = 0;
};

// Per-sample gradient descent with momentum; samples are reshuffled each
// epoch with cfg.shuffle_seed. Stops at max_epochs, when the validation
// label error has not improved for cfg.patience epochs, or as soon as it
// hits zero. The model keeps the best-validation parameters. An empty
// validation set means "validate on the training set". Samples violating
// the CTC preconditions are rejected up front, naming their index.
TrainLog train(SequenceModel& model, const std::vector<TrainSample>& train_set,
               const std::vector<TrainSample>& val_set, const TrainConfig& cfg);

// Decodes every sample; returns {label error rate, sequence accuracy}.
struct EvalStats {
  double label_error = 0;
  double seq_accuracy = 0;
};
EvalStats evaluate_model(const SequenceModel& model, const std::vector<TrainSample>& samples);

// Max over all parameters of |g_analytic - g_numeric| /
// max(|g_analytic|, |g_numeric|, 1e-8), with central finite differences of
// step epsilon. Meant for small models.
double gradient_check(const SequenceModel& model, const TrainSample& sample,
                      double epsilon = 1e-5);

}  // namespace ptx

#endif  // PYRATEXT_TRAIN_H_
