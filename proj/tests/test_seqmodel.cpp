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

#include <cmath>
#include <filesystem>

#include "ptx/rng.h"
#include "ptx/seqmodel.h"

using namespace ptx;

namespace {

Alphabet abc() { return Alphabet({'a', 'b', 'c'}); }

FeatureSequence random_seq(int T, int D, uint64_t seed, int channels = 0, int height = 0) {
  FeatureSequence seq;
  seq.frame_count = T;
  seq.frame_dim = D;
  seq.channel_count = channels;
  seq.frame_height = height;
  seq.frames.resize(static_cast<size_t>(T) * D);
  Rng rng(seed);
  for (double& v : seq.frames) v = rng.uniform(-1.5, 1.5);
  return seq;
}

void check_rows_sum_to_one(const Eigen::MatrixXd& post) {
  for (int t = 0; t < post.rows(); ++t) {
    CHECK(std::abs(post.row(t).sum() - 1.0) < 1e-9);
    for (int k = 0; k < post.cols(); ++k) CHECK(post(t, k) >= 0.0);
  }
}

}  // namespace

TEST_CASE("init_model is deterministic and respects the init ranges") {
  const SequenceModel a = init_model(ModelKind::blstm_1d, 12, 5, abc(), 99);
  const SequenceModel b = init_model(ModelKind::blstm_1d, 12, 5, abc(), 99);
  CHECK(a.params == b.params);

  const SequenceModel c = init_model(ModelKind::blstm_1d, 12, 5, abc(), 100);
  CHECK(a.params != c.params);

  for (double v : a.params) {
    CHECK(v >= -0.1);
    CHECK(v <= 1.0);  // forget biases are exactly 1
    CHECK((std::abs(v) <= 0.1 || v == 0.0 || v == 1.0));
  }
  CHECK(a.params.size() == param_count(ModelKind::blstm_1d, 12, 5, 4, 0));
}

TEST_CASE("init_model validates mdlstm channel factorization") {
  CHECK_THROWS(init_model(ModelKind::mdlstm_2d, 12, 4, abc(), 1, 0));
  CHECK_THROWS(init_model(ModelKind::mdlstm_2d, 12, 4, abc(), 1, 5));
  const SequenceModel m = init_model(ModelKind::mdlstm_2d, 12, 4, abc(), 1, 3);
  CHECK(m.frame_height() == 4);
  CHECK(m.params.size() == param_count(ModelKind::mdlstm_2d, 12, 4, 4, 3));
}

TEST_CASE("forward posterior rows sum to 1 for both kinds") {
  const SequenceModel lstm = init_model(ModelKind::blstm_1d, 10, 6, abc(), 3);
  check_rows_sum_to_one(forward(lstm, random_seq(9, 10, 17)));

  const SequenceModel md = init_model(ModelKind::mdlstm_2d, 12, 4, abc(), 3, 2);
  check_rows_sum_to_one(forward(md, random_seq(7, 12, 18, 2, 6)));
}

TEST_CASE("zero output projection yields uniform posteriors") {
  for (auto kind : {ModelKind::blstm_1d, ModelKind::mdlstm_2d}) {
    SequenceModel m = init_model(kind, 8, 3, abc(), 5, kind == ModelKind::mdlstm_2d ? 2 : 0);
    for (size_t i = output_block_offset(m); i < m.params.size(); ++i) m.params[i] = 0.0;
    const Eigen::MatrixXd post = forward(m, random_seq(6, 8, 2, 2, 4));
    for (int t = 0; t < post.rows(); ++t) {
      for (int k = 0; k < post.cols(); ++k) {
        CHECK(post(t, k) == doctest::Approx(0.25).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("blstm direction symmetry: swapped directions on reversed input") {
  const int D = 7, H = 4, K = 4;
  const SequenceModel m = init_model(ModelKind::blstm_1d, D, H, abc(), 21);

  // swap the two direction blocks and the two projection blocks
  SequenceModel swapped = m;
  const size_t dir_sz = 4ull * H * D + 4ull * H * H + 4ull * H;
  for (size_t i = 0; i < dir_sz; ++i) {
    std::swap(swapped.params[i], swapped.params[dir_sz + i]);
  }
  const size_t wout = output_block_offset(m);
  for (size_t i = 0; i < static_cast<size_t>(K) * H; ++i) {
    std::swap(swapped.params[wout + i], swapped.params[wout + static_cast<size_t>(K) * H + i]);
  }

  const FeatureSequence seq = random_seq(9, D, 33);
  FeatureSequence rev = seq;
  for (int t = 0; t < seq.frame_count; ++t) {
    for (int d = 0; d < D; ++d) rev.at(t, d) = seq.at(seq.frame_count - 1 - t, d);
  }

  const Eigen::MatrixXd p1 = forward(m, seq);
  const Eigen::MatrixXd p2 = forward(swapped, rev);
  for (int t = 0; t < p1.rows(); ++t) {
    for (int k = 0; k < K; ++k) {
      CHECK(p1(t, k) == doctest::Approx(p2(p1.rows() - 1 - t, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("forward rejects dimension mismatches") {
  const SequenceModel m = init_model(ModelKind::blstm_1d, 10, 4, abc(), 1);
  CHECK_THROWS(forward(m, random_seq(5, 11, 1)));
}

TEST_CASE("PTXM1 save/load round-trip is exact") {
  SequenceModel m = init_model(ModelKind::mdlstm_2d, 12, 3, abc(), 77, 2);
  m.train_config.learning_rate = 3.25e-4;
  m.train_config.max_epochs = 55;
  m.feature_config.xheight = 6;
  m.feature_config.mode = FeatureMode::whole;
  m.feature_config.level = -1;

  const std::string path =
      (std::filesystem::temp_directory_path() / "ptx_t_model.ptxm").string();
  save_model(m, path);
  const SequenceModel back = load_model(path);

  CHECK(back.kind == m.kind);
  CHECK(back.input_dim == m.input_dim);
  CHECK(back.hidden_units == m.hidden_units);
  CHECK(back.cell_channels == m.cell_channels);
  CHECK(back.alphabet.symbols() == m.alphabet.symbols());
  CHECK(back.rng_seed == m.rng_seed);
  CHECK(back.train_config.learning_rate == m.train_config.learning_rate);
  CHECK(back.train_config.max_epochs == 55);
  CHECK(back.feature_config.mode == FeatureMode::whole);
  CHECK(back.params == m.params);

  const FeatureSequence seq = random_seq(5, 12, 9, 2, 6);
  const Eigen::MatrixXd p1 = forward(m, seq);
  const Eigen::MatrixXd p2 = forward(back, seq);
  CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("alphabet reserves blank and round-trips symbols") {
  const Alphabet a = abc();
  CHECK(a.size() == 4);
  CHECK(Alphabet::kBlank == 0);
  CHECK(a.symbol(1) == 'a');
  CHECK(a.index_of('c') == 3);
  CHECK(a.index_of('z') == 0);
  CHECK(a.encode({'b', 'a'}) == std::vector<int>{2, 1});
  CHECK(a.decode({3, 3}) == std::vector<uint32_t>{'c', 'c'});
  CHECK_THROWS(a.encode({'z'}));
  CHECK_THROWS(Alphabet({'a', 'a'}));
}
