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

#include "ptx/seqmodel.h"

#include <cmath>
#include <stdexcept>

#include "ptx/ctc.h"
#include "ptx/rng.h"

namespace ptx {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstMap = Eigen::Map<const MatrixXd>;
using MutMap = Eigen::Map<MatrixXd>;
using ConstVecMap = Eigen::Map<const VectorXd>;
using MutVecMap = Eigen::Map<VectorXd>;

inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) {
  return 1.0 / (1.0 + (-x).exp());
}

// Offsets into the flat parameter buffer; the single source of truth for
// init, forward, backward and file layout.
struct BlstmLayout {
  int D, H, K;
  size_t wx_sz() const { return 4ull * H * D; }
  size_t wh_sz() const { return 4ull * H * H; }
  size_t dir_sz() const { return wx_sz() + wh_sz() + 4ull * H; }
  size_t wx(int d) const { return d * dir_sz(); }
  size_t wh(int d) const { return wx(d) + wx_sz(); }
  size_t b(int d) const { return wh(d) + wh_sz(); }
  size_t wout(int d) const { return 2 * dir_sz() + d * static_cast<size_t>(K) * H; }
  size_t bout() const { return 2 * dir_sz() + 2ull * K * H; }
  size_t total() const { return bout() + K; }
};

struct MdlstmLayout {
  int C, H, K;
  size_t wx_sz() const { return 5ull * H * C; }
  size_t u_sz() const { return 5ull * H * H; }
  size_t pass_sz() const { return wx_sz() + 2 * u_sz() + 5ull * H; }
  size_t wx(int p) const { return p * pass_sz(); }
  size_t ut(int p) const { return wx(p) + wx_sz(); }
  size_t uy(int p) const { return ut(p) + u_sz(); }
  size_t b(int p) const { return uy(p) + u_sz(); }
  size_t wout(int p) const { return 4 * pass_sz() + p * static_cast<size_t>(K) * H; }
  size_t bout() const { return 4 * pass_sz() + 4ull * K * H; }
  size_t total() const { return bout() + K; }
};

// Scan directions for the four corner-origin passes: (dt, dy).
constexpr int kScanDir[4][2] = {{+1, +1}, {-1, +1}, {+1, -1}, {-1, -1}};

void check_forward_input(const SequenceModel& model, const FeatureSequence& seq) {
  if (seq.frame_dim != model.input_dim) {
    throw std::invalid_argument("forward: frame_dim " + std::to_string(seq.frame_dim) +
                                " does not match model input_dim " +
                                std::to_string(model.input_dim));
  }
  if (seq.frame_count < 1) throw std::invalid_argument("forward: empty sequence");
}

MatrixXd softmax_columns(const MatrixXd& logits) {
  const int K = static_cast<int>(logits.rows());
  const int T = static_cast<int>(logits.cols());
  MatrixXd post(T, K);
  for (int t = 0; t < T; ++t) {
    const Eigen::ArrayXd shifted = logits.col(t).array() - logits.col(t).maxCoeff();
    const Eigen::ArrayXd e = shifted.exp();
    post.row(t) = (e / e.sum()).matrix().transpose();
  }
  return post;
}

// ---------------- blstm_1d ----------------

struct BlstmCache {
  MatrixXd A[2];   // 4H x T gate activations (i, f, g, o)
  MatrixXd Cc[2];  // H x T cell states
  MatrixXd TC[2];  // H x T tanh(cell)
  MatrixXd Hh[2];  // H x T hidden outputs
  MatrixXd logits; // K x T
};

void blstm_forward(const SequenceModel& model, const FeatureSequence& seq,
                   BlstmCache& cache) {
  const BlstmLayout L{model.input_dim, model.hidden_units, model.output_dim()};
  const int D = L.D, H = L.H, T = seq.frame_count;
  const double* p = model.params.data();
  ConstMap X(seq.frames.data(), D, T);

  for (int d = 0; d < 2; ++d) {
    ConstMap Wx(p + L.wx(d), 4 * H, D);
    ConstMap Wh(p + L.wh(d), 4 * H, H);
    ConstVecMap b(p + L.b(d), 4 * H);

    MatrixXd Zpre = Wx * X;
    Zpre.colwise() += b;

    cache.A[d].resize(4 * H, T);
    cache.Cc[d].resize(H, T);
    cache.TC[d].resize(H, T);
    cache.Hh[d].resize(H, T);

    VectorXd h = VectorXd::Zero(H), c = VectorXd::Zero(H);
    for (int s = 0; s < T; ++s) {
      const int t = d == 0 ? s : T - 1 - s;
      VectorXd z = Zpre.col(t);
      z.noalias() += Wh * h;
      const VectorXd gi = sigmoid(z.segment(0, H).array());
      const VectorXd gf = sigmoid(z.segment(H, H).array());
      const VectorXd gg = z.segment(2 * H, H).array().tanh();
      const VectorXd go = sigmoid(z.segment(3 * H, H).array());
      c = gf.cwiseProduct(c) + gi.cwiseProduct(gg);
      const VectorXd tc = c.array().tanh();
      h = go.cwiseProduct(tc);
      cache.A[d].col(t).segment(0, H) = gi;
      cache.A[d].col(t).segment(H, H) = gf;
      cache.A[d].col(t).segment(2 * H, H) = gg;
      cache.A[d].col(t).segment(3 * H, H) = go;
      cache.Cc[d].col(t) = c;
      cache.TC[d].col(t) = tc;
      cache.Hh[d].col(t) = h;
    }
  }

  ConstMap Wout0(p + L.wout(0), L.K, H);
  ConstMap Wout1(p + L.wout(1), L.K, H);
  ConstVecMap bout(p + L.bout(), L.K);
  cache.logits.noalias() = Wout0 * cache.Hh[0];
  cache.logits.noalias() += Wout1 * cache.Hh[1];
  cache.logits.colwise() += bout;
}

// dLogits is K x T; gradients are accumulated into grad (params layout).
void blstm_backward(const SequenceModel& model, const FeatureSequence& seq,
                    const BlstmCache& cache, const MatrixXd& dLogits,
                    std::vector<double>& grad) {
  const BlstmLayout L{model.input_dim, model.hidden_units, model.output_dim()};
  const int D = L.D, H = L.H, K = L.K, T = seq.frame_count;
  const double* p = model.params.data();
  double* g = grad.data();
  ConstMap X(seq.frames.data(), D, T);

  MutVecMap gBout(g + L.bout(), K);
  gBout = dLogits.rowwise().sum();

  for (int d = 0; d < 2; ++d) {
    ConstMap Wh(p + L.wh(d), 4 * H, H);
    ConstMap Wout(p + L.wout(d), K, H);
    MutMap gWx(g + L.wx(d), 4 * H, D);
    MutMap gWh(g + L.wh(d), 4 * H, H);
    MutVecMap gB(g + L.b(d), 4 * H);
    MutMap gWout(g + L.wout(d), K, H);

    gWout.noalias() = dLogits * cache.Hh[d].transpose();
    const MatrixXd dHproj = Wout.transpose() * dLogits;  // H x T

    MatrixXd dZ(4 * H, T);
    VectorXd dh_rec = VectorXd::Zero(H), dc_rec = VectorXd::Zero(H);
    for (int s = T - 1; s >= 0; --s) {
      const int t = d == 0 ? s : T - 1 - s;
      const int t_prev = d == 0 ? t - 1 : t + 1;  // previous step in scan order

      const auto gi = cache.A[d].col(t).segment(0, H).array();
      const auto gf = cache.A[d].col(t).segment(H, H).array();
      const auto gg = cache.A[d].col(t).segment(2 * H, H).array();
      const auto go = cache.A[d].col(t).segment(3 * H, H).array();
      const auto tc = cache.TC[d].col(t).array();

      const Eigen::ArrayXd dh = dHproj.col(t).array() + dh_rec.array();
      const Eigen::ArrayXd dc = dh * go * (1.0 - tc.square()) + dc_rec.array();

      Eigen::ArrayXd c_prev = Eigen::ArrayXd::Zero(H);
      Eigen::VectorXd h_prev = VectorXd::Zero(H);
      if (s > 0) {
        c_prev = cache.Cc[d].col(t_prev).array();
        h_prev = cache.Hh[d].col(t_prev);
      }

      VectorXd dz(4 * H);
      dz.segment(0, H) = (dc * gg * gi * (1.0 - gi)).matrix();          // input gate
      dz.segment(H, H) = (dc * c_prev * gf * (1.0 - gf)).matrix();      // forget gate
      dz.segment(2 * H, H) = (dc * gi * (1.0 - gg.square())).matrix();  // candidate
      dz.segment(3 * H, H) = (dh * tc * go * (1.0 - go)).matrix();      // output gate

      dZ.col(t) = dz;
      gWh.noalias() += dz * h_prev.transpose();
      gB += dz;
      dh_rec.noalias() = Wh.transpose() * dz;
      dc_rec = (dc * gf).matrix();
    }
    gWx.noalias() = dZ * X.transpose();
  }
}

// ---------------- mdlstm_2d ----------------

struct MdlstmCache {
  MatrixXd Xcells;  // C x (T*Fh), column index t*Fh + y
  MatrixXd A[4];    // 5H x cells gate activations (i, f_t, f_y, g, o)
  MatrixXd Cc[4];   // H x cells
  MatrixXd TC[4];   // H x cells
  MatrixXd Hh[4];   // H x cells
  MatrixXd S[4];    // H x T collapsed (height-summed) hidden outputs
  MatrixXd logits;  // K x T
};

void mdlstm_forward(const SequenceModel& model, const FeatureSequence& seq,
                    MdlstmCache& cache) {
  const int C = model.cell_channels, H = model.hidden_units, K = model.output_dim();
  const int Fh = model.frame_height();
  const int T = seq.frame_count;
  const int cells = T * Fh;
  const MdlstmLayout L{C, H, K};
  const double* p = model.params.data();

  ConstMap X(seq.frames.data(), model.input_dim, T);
  cache.Xcells.resize(C, cells);
  for (int t = 0; t < T; ++t) {
    for (int y = 0; y < Fh; ++y) {
      for (int c = 0; c < C; ++c) {
        cache.Xcells(c, t * Fh + y) = X(c * Fh + y, t);
      }
    }
  }

  cache.logits = MatrixXd::Zero(K, T);
  ConstVecMap bout(p + L.bout(), K);

  for (int pass = 0; pass < 4; ++pass) {
    const int dt = kScanDir[pass][0], dy = kScanDir[pass][1];
    ConstMap Wx(p + L.wx(pass), 5 * H, C);
    ConstMap Ut(p + L.ut(pass), 5 * H, H);
    ConstMap Uy(p + L.uy(pass), 5 * H, H);
    ConstVecMap b(p + L.b(pass), 5 * H);

    MatrixXd Zpre = Wx * cache.Xcells;
    Zpre.colwise() += b;

    cache.A[pass].resize(5 * H, cells);
    cache.Cc[pass].resize(H, cells);
    cache.TC[pass].resize(H, cells);
    cache.Hh[pass].resize(H, cells);

    for (int st = 0; st < T; ++st) {
      const int t = dt > 0 ? st : T - 1 - st;
      for (int sy = 0; sy < Fh; ++sy) {
        const int y = dy > 0 ? sy : Fh - 1 - sy;
        const int idx = t * Fh + y;
        VectorXd z = Zpre.col(idx);
        VectorXd c_t = VectorXd::Zero(H), c_y = VectorXd::Zero(H);
        if (st > 0) {
          const int prev = (t - dt) * Fh + y;
          z.noalias() += Ut * cache.Hh[pass].col(prev);
          c_t = cache.Cc[pass].col(prev);
        }
        if (sy > 0) {
          const int prev = t * Fh + (y - dy);
          z.noalias() += Uy * cache.Hh[pass].col(prev);
          c_y = cache.Cc[pass].col(prev);
        }
        const VectorXd gi = sigmoid(z.segment(0, H).array());
        const VectorXd gft = sigmoid(z.segment(H, H).array());
        const VectorXd gfy = sigmoid(z.segment(2 * H, H).array());
        const VectorXd gg = z.segment(3 * H, H).array().tanh();
        const VectorXd go = sigmoid(z.segment(4 * H, H).array());
        const VectorXd c =
            gft.cwiseProduct(c_t) + gfy.cwiseProduct(c_y) + gi.cwiseProduct(gg);
        const VectorXd tc = c.array().tanh();
        cache.A[pass].col(idx).segment(0, H) = gi;
        cache.A[pass].col(idx).segment(H, H) = gft;
        cache.A[pass].col(idx).segment(2 * H, H) = gfy;
        cache.A[pass].col(idx).segment(3 * H, H) = gg;
        cache.A[pass].col(idx).segment(4 * H, H) = go;
        cache.Cc[pass].col(idx) = c;
        cache.TC[pass].col(idx) = tc;
        cache.Hh[pass].col(idx) = go.cwiseProduct(tc);
      }
    }

    // Collapse over the height axis, then project.
    cache.S[pass] = MatrixXd::Zero(H, T);
    for (int t = 0; t < T; ++t) {
      for (int y = 0; y < Fh; ++y) {
        cache.S[pass].col(t) += cache.Hh[pass].col(t * Fh + y);
      }
    }
    ConstMap Wout(p + L.wout(pass), K, H);
    cache.logits.noalias() += Wout * cache.S[pass];
  }
  cache.logits.colwise() += bout;
}

void mdlstm_backward(const SequenceModel& model, const FeatureSequence& seq,
                     const MdlstmCache& cache, const MatrixXd& dLogits,
                     std::vector<double>& grad) {
  const int C = model.cell_channels, H = model.hidden_units, K = model.output_dim();
  const int Fh = model.frame_height();
  const int T = seq.frame_count;
  const int cells = T * Fh;
  const MdlstmLayout L{C, H, K};
  const double* p = model.params.data();
  double* g = grad.data();

  MutVecMap gBout(g + L.bout(), K);
  gBout = dLogits.rowwise().sum();

  for (int pass = 0; pass < 4; ++pass) {
    const int dt = kScanDir[pass][0], dy = kScanDir[pass][1];
    ConstMap Ut(p + L.ut(pass), 5 * H, H);
    ConstMap Uy(p + L.uy(pass), 5 * H, H);
    ConstMap Wout(p + L.wout(pass), K, H);
    MutMap gWx(g + L.wx(pass), 5 * H, C);
    MutMap gUt(g + L.ut(pass), 5 * H, H);
    MutMap gUy(g + L.uy(pass), 5 * H, H);
    MutVecMap gB(g + L.b(pass), 5 * H);
    MutMap gWout(g + L.wout(pass), K, H);

    gWout.noalias() = dLogits * cache.S[pass].transpose();
    const MatrixXd dS = Wout.transpose() * dLogits;  // H x T

    // Collapse broadcast: every cell in column t starts with dS.col(t).
    MatrixXd dH(H, cells), dC = MatrixXd::Zero(H, cells);
    for (int t = 0; t < T; ++t) {
      for (int y = 0; y < Fh; ++y) dH.col(t * Fh + y) = dS.col(t);
    }

    MatrixXd dZ(5 * H, cells);
    for (int st = T - 1; st >= 0; --st) {
      const int t = dt > 0 ? st : T - 1 - st;
      for (int sy = Fh - 1; sy >= 0; --sy) {
        const int y = dy > 0 ? sy : Fh - 1 - sy;
        const int idx = t * Fh + y;

        const auto gi = cache.A[pass].col(idx).segment(0, H).array();
        const auto gft = cache.A[pass].col(idx).segment(H, H).array();
        const auto gfy = cache.A[pass].col(idx).segment(2 * H, H).array();
        const auto gg = cache.A[pass].col(idx).segment(3 * H, H).array();
        const auto go = cache.A[pass].col(idx).segment(4 * H, H).array();
        const auto tc = cache.TC[pass].col(idx).array();

        const Eigen::ArrayXd dh = dH.col(idx).array();
        const Eigen::ArrayXd dc = dh * go * (1.0 - tc.square()) + dC.col(idx).array();

        Eigen::ArrayXd c_t = Eigen::ArrayXd::Zero(H), c_y = Eigen::ArrayXd::Zero(H);
        VectorXd h_t = VectorXd::Zero(H), h_y = VectorXd::Zero(H);
        if (st > 0) {
          const int prev = (t - dt) * Fh + y;
          c_t = cache.Cc[pass].col(prev).array();
          h_t = cache.Hh[pass].col(prev);
        }
        if (sy > 0) {
          const int prev = t * Fh + (y - dy);
          c_y = cache.Cc[pass].col(prev).array();
          h_y = cache.Hh[pass].col(prev);
        }

        VectorXd dz(5 * H);
        dz.segment(0, H) = (dc * gg * gi * (1.0 - gi)).matrix();
        dz.segment(H, H) = (dc * c_t * gft * (1.0 - gft)).matrix();
        dz.segment(2 * H, H) = (dc * c_y * gfy * (1.0 - gfy)).matrix();
        dz.segment(3 * H, H) = (dc * gi * (1.0 - gg.square())).matrix();
        dz.segment(4 * H, H) = (dh * tc * go * (1.0 - go)).matrix();
        dZ.col(idx) = dz;

        gUt.noalias() += dz * h_t.transpose();
        gUy.noalias() += dz * h_y.transpose();
        gB += dz;

        if (st > 0) {
          const int prev = (t - dt) * Fh + y;
          dH.col(prev).noalias() += Ut.transpose() * dz;
          dC.col(prev) += (dc * gft).matrix();
        }
        if (sy > 0) {
          const int prev = t * Fh + (y - dy);
          dH.col(prev).noalias() += Uy.transpose() * dz;
          dC.col(prev) += (dc * gfy).matrix();
        }
      }
    }
    gWx.noalias() = dZ * cache.Xcells.transpose();
  }
}

MatrixXd logits_of(const SequenceModel& model, const FeatureSequence& seq) {
  if (model.kind == ModelKind::blstm_1d) {
    BlstmCache cache;
    blstm_forward(model, seq, cache);
    return cache.logits;
  }
  MdlstmCache cache;
  mdlstm_forward(model, seq, cache);
  return cache.logits;
}

}  // namespace

size_t param_count(ModelKind kind, int input_dim, int hidden_units, int output_dim,
                   int cell_channels) {
  if (kind == ModelKind::blstm_1d) {
    return BlstmLayout{input_dim, hidden_units, output_dim}.total();
  }
  return MdlstmLayout{cell_channels, hidden_units, output_dim}.total();
}

size_t output_block_offset(const SequenceModel& model) {
  if (model.kind == ModelKind::blstm_1d) {
    return BlstmLayout{model.input_dim, model.hidden_units, model.output_dim()}.wout(0);
  }
  return MdlstmLayout{model.cell_channels, model.hidden_units, model.output_dim()}.wout(0);
}

SequenceModel init_model(ModelKind kind, int input_dim, int hidden_units,
                         const Alphabet& alphabet, uint64_t seed, int cell_channels) {
  if (input_dim < 1 || hidden_units < 1) {
    throw std::invalid_argument("init_model: input_dim and hidden_units must be >= 1");
  }
  SequenceModel model;
  model.kind = kind;
  model.input_dim = input_dim;
  model.hidden_units = hidden_units;
  model.alphabet = alphabet;
  model.rng_seed = seed;

  if (kind == ModelKind::mdlstm_2d) {
    if (cell_channels < 1 || input_dim % cell_channels != 0) {
      throw std::invalid_argument(
          "init_model: mdlstm_2d needs cell_channels dividing input_dim");
    }
    model.cell_channels = cell_channels;
  } else {
    model.cell_channels = 0;
  }

  const int K = model.output_dim();
  const size_t n = param_count(kind, input_dim, hidden_units, K, model.cell_channels);
  model.params.assign(n, 0.0);

  Rng rng(seed);
  const int H = hidden_units;
  if (kind == ModelKind::blstm_1d) {
    const BlstmLayout L{input_dim, H, K};
    for (int d = 0; d < 2; ++d) {
      for (size_t i = 0; i < L.wx_sz(); ++i) model.params[L.wx(d) + i] = rng.uniform(-0.1, 0.1);
      for (size_t i = 0; i < L.wh_sz(); ++i) model.params[L.wh(d) + i] = rng.uniform(-0.1, 0.1);
      for (int i = 0; i < H; ++i) model.params[L.b(d) + H + i] = 1.0;  // forget bias
    }
    for (size_t i = 0; i < 2ull * K * H; ++i) model.params[L.wout(0) + i] = rng.uniform(-0.1, 0.1);
  } else {
    const MdlstmLayout L{model.cell_channels, H, K};
    for (int p = 0; p < 4; ++p) {
      for (size_t i = 0; i < L.wx_sz(); ++i) model.params[L.wx(p) + i] = rng.uniform(-0.1, 0.1);
      for (size_t i = 0; i < L.u_sz(); ++i) model.params[L.ut(p) + i] = rng.uniform(-0.1, 0.1);
      for (size_t i = 0; i < L.u_sz(); ++i) model.params[L.uy(p) + i] = rng.uniform(-0.1, 0.1);
      for (int i = 0; i < 2 * H; ++i) model.params[L.b(p) + H + i] = 1.0;  // both forget biases
    }
    for (size_t i = 0; i < 4ull * K * H; ++i) model.params[L.wout(0) + i] = rng.uniform(-0.1, 0.1);
  }
  return model;
}

Eigen::MatrixXd forward(const SequenceModel& model, const FeatureSequence& seq) {
  check_forward_input(model, seq);
  return softmax_columns(logits_of(model, seq));
}

LossGrad loss_and_gradients(const SequenceModel& model, const FeatureSequence& seq,
                            const std::vector<int>& label) {
  check_forward_input(model, seq);
  LossGrad out;
  out.grad.assign(model.params.size(), 0.0);

  if (model.kind == ModelKind::blstm_1d) {
    BlstmCache cache;
    blstm_forward(model, seq, cache);
    const MatrixXd post = softmax_columns(cache.logits);
    CtcResult ctc = ctc_loss(post, label);
    out.loss = ctc.loss;
    const MatrixXd dLogits = ctc.grad.transpose();  // K x T
    blstm_backward(model, seq, cache, dLogits, out.grad);
  } else {
    MdlstmCache cache;
    mdlstm_forward(model, seq, cache);
    const MatrixXd post = softmax_columns(cache.logits);
    CtcResult ctc = ctc_loss(post, label);
    out.loss = ctc.loss;
    const MatrixXd dLogits = ctc.grad.transpose();
    mdlstm_backward(model, seq, cache, dLogits, out.grad);
  }
  return out;
}

}  // namespace ptx
