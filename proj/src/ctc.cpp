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

#include "ptx/ctc.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptx {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();
constexpr double kProbFloor = 1e-12;
constexpr int kBlank = 0;

inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace

int ctc_min_frames(const std::vector<int>& label) {
  int needed = static_cast<int>(label.size());
  for (size_t i = 1; i < label.size(); ++i) {
    if (label[i] == label[i - 1]) ++needed;
  }
  return needed;
}

CtcResult ctc_loss(const Eigen::MatrixXd& posteriors, const std::vector<int>& label) {
  const int T = static_cast<int>(posteriors.rows());
  const int K = static_cast<int>(posteriors.cols());
  if (T < 1 || K < 2) throw std::invalid_argument("ctc_loss: bad posterior shape");
  for (int idx : label) {
    if (idx <= 0 || idx >= K) {
      throw std::invalid_argument("ctc_loss: unknown symbol index " + std::to_string(idx));
    }
  }
  if (T < ctc_min_frames(label)) {
    throw std::invalid_argument("ctc_loss: label too long for " + std::to_string(T) +
                                " frames");
  }

  // Blank-augmented label: blank, l1, blank, l2, ..., blank.
  const int L = static_cast<int>(label.size());
  const int S = 2 * L + 1;
  std::vector<int> ext(S, kBlank);
  for (int i = 0; i < L; ++i) ext[2 * i + 1] = label[i];

  Eigen::MatrixXd logy(T, K);
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < K; ++k) {
      logy(t, k) = std::log(std::max(posteriors(t, k), kProbFloor));
    }
  }

  // Forward variables; alpha(t,s) includes the emission at t.
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(T, S, kLogZero);
  alpha(0, 0) = logy(0, ext[0]);
  if (S > 1) alpha(0, 1) = logy(0, ext[1]);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = log_add(a, alpha(t - 1, s - 1));
      if (s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2]) {
        a = log_add(a, alpha(t - 1, s - 2));
      }
      if (a != kLogZero) alpha(t, s) = a + logy(t, ext[s]);
    }
  }

  const double log_p = log_add(alpha(T - 1, S - 1), S > 1 ? alpha(T - 1, S - 2) : kLogZero);
  if (log_p == kLogZero) {
    throw std::runtime_error("ctc_loss: label has zero probability");
  }

  // Backward variables; beta(t,s) excludes the emission at t.
  Eigen::MatrixXd beta = Eigen::MatrixXd::Constant(T, S, kLogZero);
  beta(T - 1, S - 1) = 0.0;
  if (S > 1) beta(T - 1, S - 2) = 0.0;
  for (int t = T - 2; t >= 0; --t) {
    for (int s = S - 1; s >= 0; --s) {
      double b = beta(t + 1, s) == kLogZero ? kLogZero
                                            : beta(t + 1, s) + logy(t + 1, ext[s]);
      if (s + 1 < S && beta(t + 1, s + 1) != kLogZero) {
        b = log_add(b, beta(t + 1, s + 1) + logy(t + 1, ext[s + 1]));
      }
      if (s + 2 < S && ext[s + 2] != kBlank && ext[s + 2] != ext[s] &&
          beta(t + 1, s + 2) != kLogZero) {
        b = log_add(b, beta(t + 1, s + 2) + logy(t + 1, ext[s + 2]));
      }
      beta(t, s) = b;
    }
  }

  // grad(t,k) = y(t,k) - sum_{s: ext[s]=k} exp(alpha + beta - log_p).
  CtcResult res;
  res.loss = -log_p;
  res.grad = posteriors;
  for (int t = 0; t < T; ++t) {
    std::vector<double> occ(K, kLogZero);
    for (int s = 0; s < S; ++s) {
      if (alpha(t, s) == kLogZero || beta(t, s) == kLogZero) continue;
      occ[ext[s]] = log_add(occ[ext[s]], alpha(t, s) + beta(t, s));
    }
    for (int k = 0; k < K; ++k) {
      if (occ[k] != kLogZero) res.grad(t, k) -= std::exp(occ[k] - log_p);
    }
  }
  return res;
}

std::vector<int> ctc_greedy_decode(const Eigen::MatrixXd& posteriors) {
  std::vector<int> out;
  int prev = kBlank;
  for (int t = 0; t < posteriors.rows(); ++t) {
    Eigen::Index argmax = 0;
    posteriors.row(t).maxCoeff(&argmax);
    const int best = static_cast<int>(argmax);
    if (best != kBlank && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace ptx
