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

#ifndef PYRATEXT_EVAL_H_
#define PYRATEXT_EVAL_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ptx {

// Unit-cost insert/delete/substitute distance.
template <typename Seq>
int levenshtein(const Seq& a, const Seq& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

// (reference, hypothesis) decoded label pairs.
using SeqPair = std::pair<std::vector<int>, std::vector<int>>;

// Sum of edit distances over the sum of reference lengths.
double character_error_rate(const std::vector<SeqPair>& pairs);

struct PRF {
  double precision = 0;
  double recall = 0;
  double f_measure = 0;
};

// Alignment-level character matching: M = equal symbols in a minimal edit
// alignment (ties broken toward more matches), P = M / total hypothesis
// length, R = M / total reference length, F = 2PR/(P+R) (0 when P+R = 0).
PRF precision_recall_f(const std::vector<SeqPair>& pairs);

// Number of matched symbols for one pair, as defined above.
int alignment_matches(const std::vector<int>& reference, const std::vector<int>& hypothesis);

// Accuracy percentages over repeated seeds for one pyramid level.
struct LevelResult {
  int level = 0;  // -1 marks the whole-pyramid row
  std::vector<double> accuracy_runs;      // percent, one entry per seed
  std::vector<double> seq_accuracy_runs;  // percent, one entry per seed
  double precision = 0;
  double recall = 0;
};

// Writes `level,accuracy_mean,accuracy_std,precision,recall,f_measure` rows
// (2 decimals; sample std over seeds; whole-pyramid row last) to csv_path and
// a plain-text table, with a sequence-accuracy column, next to it (.txt).
// Each result needs at least 2 runs.
void report_levels(const std::vector<LevelResult>& results, const std::string& csv_path);

}  // namespace ptx

#endif  // PYRATEXT_EVAL_H_
