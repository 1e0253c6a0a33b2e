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

#include "ptx/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ptx/ctc.h"
#include "ptx/eval.h"
#include "ptx/rng.h"

namespace ptx {

namespace {

void reject_bad_samples(const SequenceModel& model,
                        const std::vector<TrainSample>& samples, const char* set_name) {
  const int K = model.output_dim();
  for (size_t i = 0; i < samples.size(); ++i) {
    const TrainSample& s = samples[i];
    const std::string where = std::string(set_name) + " sample " + std::to_string(i);
    if (s.label.empty()) throw std::invalid_argument(where + ": empty label");
    for (int idx : s.label) {
      if (idx <= 0 || idx >= K) {
        throw std::invalid_argument(where + ": unknown symbol index " + std::to_string(idx));
      }
    }
    if (s.features.frame_dim != model.input_dim) {
      throw std::invalid_argument(where + ": frame_dim mismatch");
    }
    if (s.features.frame_count < ctc_min_frames(s.label)) {
      throw std::invalid_argument(where + ": label needs more frames than the sequence has");
    }
  }
}

}  // namespace

EvalStats evaluate_model(const SequenceModel& model, const std::vector<TrainSample>& samples) {
  std::vector<SeqPair> pairs;
  pairs.reserve(samples.size());
  size_t exact = 0;
  for (const TrainSample& s : samples) {
    std::vector<int> hyp = ctc_greedy_decode(forward(model, s.features));
    if (hyp == s.label) ++exact;
    pairs.emplace_back(s.label, std::move(hyp));
  }
  EvalStats stats;
  stats.label_error = character_error_rate(pairs);
  stats.seq_accuracy = samples.empty() ? 0.0 : static_cast<double>(exact) / samples.size();
  return stats;
}

TrainLog train(SequenceModel& model, const std::vector<TrainSample>& train_set,
               const std::vector<TrainSample>& val_set, const TrainConfig& cfg) {
  if (cfg.learning_rate <= 0) throw std::invalid_argument("train: learning_rate must be > 0");
  if (cfg.momentum < 0 || cfg.momentum >= 1) {
    throw std::invalid_argument("train: momentum must be in [0,1)");
  }
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  reject_bad_samples(model, train_set, "train");
  reject_bad_samples(model, val_set, "validation");
  const std::vector<TrainSample>& val = val_set.empty() ? train_set : val_set;

  model.train_config = cfg;
  std::vector<double> velocity(model.params.size(), 0.0);
  std::vector<double> best_params = model.params;
  double best_err = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  int since_improve = 0;

  Rng rng(cfg.shuffle_seed);
  std::vector<size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), size_t{0});

  TrainLog log;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (size_t idx : order) {
      const TrainSample& s = train_set[idx];
      LossGrad lg = loss_and_gradients(model, s.features, s.label);
      if (!std::isfinite(lg.loss)) {
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      loss_sum += lg.loss;
      for (size_t j = 0; j < model.params.size(); ++j) {
        velocity[j] = cfg.momentum * velocity[j] - cfg.learning_rate * lg.grad[j];
        model.params[j] += velocity[j];
      }
    }

    const EvalStats vs = evaluate_model(model, val);
    log.epochs.push_back({epoch, loss_sum / train_set.size(), vs.label_error,
                          vs.seq_accuracy});

    if (vs.label_error < best_err) {
      best_err = vs.label_error;
      best_epoch = epoch;
      best_params = model.params;
      since_improve = 0;
    } else {
      ++since_improve;
    }
    if (best_err == 0.0) break;  // exact on validation; no further improvement possible
    if (since_improve >= cfg.patience) break;
  }

  model.params = std::move(best_params);
  log.best_epoch = best_epoch;
  log.best_val_error = best_err;
  return log;
}

double gradient_check(const SequenceModel& model, const TrainSample& sample,
                      double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("gradient_check: epsilon must be > 0");
  const LossGrad analytic = loss_and_gradients(model, sample.features, sample.label);

  SequenceModel probe = model;
  auto loss_at = [&](size_t j, double value) {
    probe.params[j] = value;
    const double loss = ctc_loss(forward(probe, sample.features), sample.label).loss;
    probe.params[j] = model.params[j];
    return loss;
  };

  double max_rel = 0.0;
  for (size_t j = 0; j < model.params.size(); ++j) {
    const double lp = loss_at(j, model.params[j] + epsilon);
    const double lm = loss_at(j, model.params[j] - epsilon);
    const double numeric = (lp - lm) / (2.0 * epsilon);
    const double denom = std::max({std::abs(analytic.grad[j]), std::abs(numeric), 1e-8});
    max_rel = std::max(max_rel, std::abs(analytic.grad[j] - numeric) / denom);
  }
  return max_rel;
}

}  // namespace ptx
