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

#ifndef PYRATEXT_CTC_H_
#define PYRATEXT_CTC_H_

#include <vector>

#include <Eigen/Dense>

namespace ptx {

struct CtcResult {
  double loss = 0.0;          // -ln p(label | posteriors)
  Eigen::MatrixXd grad;       // T x K, gradient w.r.t. pre-softmax inputs
};

// Log-space forward-backward over the blank-augmented label. posteriors is
// T x K with blank at column 0; label entries are symbol indices in [1, K).
// Entries are floored at 1e-12 before logs. Requires
// T >= |label| + (number of adjacent repeats).
CtcResult ctc_loss(const Eigen::MatrixXd& posteriors, const std::vector<int>& label);

// Frames needed to emit the label: |label| plus one blank per adjacent repeat.
int ctc_min_frames(const std::vector<int>& label);

// Per-frame argmax, collapse consecutive repeats, drop blanks.
std::vector<int> ctc_greedy_decode(const Eigen::MatrixXd& posteriors);

}  // namespace ptx

#endif  // PYRATEXT_CTC_H_
