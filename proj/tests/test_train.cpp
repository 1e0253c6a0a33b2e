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

#include <string>
#include <vector>

#include "ptx/ctc.h"
#include "ptx/rng.h"
#include "ptx/train.h"

using namespace ptx;

namespace {

Alphabet abc() { return Alphabet({'a', 'b', 'c'}); }

FeatureSequence random_seq(int T, int D, uint64_t seed) {
  FeatureSequence seq;
  seq.frame_count = T;
  seq.frame_dim = D;
  seq.frames.resize(static_cast<size_t>(T) * D);
  Rng rng(seed);
  for (double& v : seq.frames) v = rng.uniform(-1.0, 1.0);
  return seq;
}

// Small deterministic toy set: each label symbol drives a few frames of a
// symbol-specific input pattern, so the mapping is learnable.
std::vector<TrainSample> toy_set(int n, int D, uint64_t seed) {
  std::vector<TrainSample> out;
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const int len = 1 + static_cast<int>(rng.below(2));
    std::vector<int> label(len);
    for (int& s : label) s = 1 + static_cast<int>(rng.below(3));
    const int per = 4;
    FeatureSequence seq;
    seq.frame_count = len * per;
    seq.frame_dim = D;
    seq.frames.assign(static_cast<size_t>(seq.frame_count) * D, 0.0);
    for (int k = 0; k < len; ++k) {
      for (int t = k * per; t < (k + 1) * per; ++t) {
        for (int d = 0; d < D; ++d) {
          const double base = (d % 3) == (label[k] - 1) ? 1.0 : -0.3;
          seq.at(t, d) = base + 0.05 * rng.uniform(-1.0, 1.0);
        }
      }
    }
    out.push_back({std::move(seq), std::move(label)});
  }
  return out;
}

}  // namespace

TEST_CASE("gradient_check: blstm_1d analytic gradients match finite differences") {
  const SequenceModel m = init_model(ModelKind::blstm_1d, 12, 4, abc(), 42);
  const TrainSample sample{random_seq(6, 12, 4), {1, 3}};
  CHECK(gradient_check(m, sample) < 1e-4);
}

TEST_CASE("gradient_check: mdlstm_2d analytic gradients match finite differences") {
  const SequenceModel m = init_model(ModelKind::mdlstm_2d, 12, 4, abc(), 42, 2);
  const TrainSample sample{random_seq(5, 12, 5), {2, 1}};
  CHECK(gradient_check(m, sample) < 1e-4);
}

TEST_CASE("gradient_check rejects a degenerate step") {
  const SequenceModel m = init_model(ModelKind::blstm_1d, 4, 2, abc(), 1);
  const TrainSample sample{random_seq(3, 4, 1), {1}};
  CHECK_THROWS(gradient_check(m, sample, 0.0));
}

TEST_CASE("training loss decreases on the toy fixture") {
  SequenceModel m = init_model(ModelKind::blstm_1d, 6, 8, abc(), 7);
  const auto data = toy_set(5, 6, 123);
  TrainConfig cfg;
  cfg.learning_rate = 2e-3;
  cfg.max_epochs = 10;
  cfg.patience = 10;
  cfg.shuffle_seed = 5;
  const TrainLog log = train(m, data, {}, cfg);
  REQUIRE(log.epochs.size() >= 2);
  CHECK(log.epochs.back().train_loss <= log.epochs.front().train_loss);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
  const auto data = toy_set(4, 6, 321);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.max_epochs = 3;
  cfg.shuffle_seed = 9;

  SequenceModel a = init_model(ModelKind::blstm_1d, 6, 4, abc(), 11);
  SequenceModel b = init_model(ModelKind::blstm_1d, 6, 4, abc(), 11);
  const TrainLog la = train(a, data, {}, cfg);
  const TrainLog lb = train(b, data, {}, cfg);

  CHECK(a.params == b.params);
  REQUIRE(la.epochs.size() == lb.epochs.size());
  for (size_t i = 0; i < la.epochs.size(); ++i) {
    CHECK(la.epochs[i].train_loss == lb.epochs[i].train_loss);
    CHECK(la.epochs[i].val_label_error == lb.epochs[i].val_label_error);
  }
}

TEST_CASE("train rejects samples violating CTC preconditions, naming the index") {
  SequenceModel m = init_model(ModelKind::blstm_1d, 6, 4, abc(), 1);
  auto data = toy_set(3, 6, 77);
  data[1].label = {1, 1, 1, 1, 1, 1, 1, 1};  // needs 15 frames, sequence has 4-8
  TrainConfig cfg;
  try {
    train(m, data, {}, cfg);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("sample 1") != std::string::npos);
  }
}

TEST_CASE("a small mdlstm_2d run overfits a 3-line toy set") {
  auto data = toy_set(3, 6, 2026);
  for (auto& s : data) {
    s.features.channel_count = 2;
    s.features.frame_height = 3;
  }
  SequenceModel m = init_model(ModelKind::mdlstm_2d, 6, 6, abc(), 3, 2);
  TrainConfig cfg;
  cfg.learning_rate = 3e-3;
  cfg.max_epochs = 120;
  cfg.patience = 120;
  cfg.shuffle_seed = 3;
  train(m, data, {}, cfg);
  const EvalStats stats = evaluate_model(m, data);
  CHECK(stats.seq_accuracy == doctest::Approx(1.0));
}
