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

#include "ptx/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ptx {

double character_error_rate(const std::vector<SeqPair>& pairs) {
  size_t total_ref = 0;
  long long total_dist = 0;
  for (const auto& [ref, hyp] : pairs) {
    total_ref += ref.size();
    total_dist += levenshtein(ref, hyp);
  }
  if (total_ref == 0) throw std::invalid_argument("character_error_rate: empty reference total");
  return static_cast<double>(total_dist) / static_cast<double>(total_ref);
}

int alignment_matches(const std::vector<int>& reference, const std::vector<int>& hypothesis) {
  const size_t n = reference.size(), m = hypothesis.size();
  // DP over (cost, matches); minimize cost, tie-break toward more matches so
  // the match count is well-defined.
  struct Cell {
    int cost;
    int matches;
  };
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = {static_cast<int>(j), 0};
  auto better = [](const Cell& a, const Cell& b) {
    return a.cost < b.cost || (a.cost == b.cost && a.matches > b.matches);
  };
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {static_cast<int>(i), 0};
    for (size_t j = 1; j <= m; ++j) {
      const bool eq = reference[i - 1] == hypothesis[j - 1];
      Cell best = {prev[j - 1].cost + (eq ? 0 : 1), prev[j - 1].matches + (eq ? 1 : 0)};
      const Cell del = {prev[j].cost + 1, prev[j].matches};
      const Cell ins = {cur[j - 1].cost + 1, cur[j - 1].matches};
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m].matches;
}

PRF precision_recall_f(const std::vector<SeqPair>& pairs) {
  size_t total_ref = 0, total_hyp = 0;
  long long total_matches = 0;
  for (const auto& [ref, hyp] : pairs) {
    total_ref += ref.size();
    total_hyp += hyp.size();
    total_matches += alignment_matches(ref, hyp);
  }
  if (total_ref == 0) throw std::invalid_argument("precision_recall_f: empty reference total");
  PRF out;
  out.precision = total_hyp == 0 ? 0.0 : static_cast<double>(total_matches) / total_hyp;
  out.recall = static_cast<double>(total_matches) / total_ref;
  const double pr = out.precision + out.recall;
  out.f_measure = pr == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / pr;
  return out;
}

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string level_name(int level) {
  return level < 0 ? "whole" : std::to_string(level);
}

}  // namespace

void report_levels(const std::vector<LevelResult>& results, const std::string& csv_path) {
  if (results.empty()) throw std::invalid_argument("report_levels: no results");
  for (const LevelResult& r : results) {
    if (r.accuracy_runs.size() < 2) {
      throw std::invalid_argument("report_levels: level " + level_name(r.level) +
                                  " needs at least 2 seed repetitions");
    }
  }

  std::vector<LevelResult> rows = results;
  std::stable_sort(rows.begin(), rows.end(), [](const LevelResult& a, const LevelResult& b) {
    // whole-pyramid row sorts last
    if ((a.level < 0) != (b.level < 0)) return b.level < 0;
    return a.level < b.level;
  });

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error(csv_path + ": cannot open for writing");
  csv << "level,accuracy_mean,accuracy_std,precision,recall,f_measure\n";

  std::string txt_path = csv_path;
  const auto dot = txt_path.find_last_of('.');
  txt_path = (dot == std::string::npos ? txt_path : txt_path.substr(0, dot)) + ".txt";
  std::ofstream txt(txt_path);
  if (!txt) throw std::runtime_error(txt_path + ": cannot open for writing");
  txt << "level      accuracy          seq_accuracy      precision  recall  f_measure\n";

  for (const LevelResult& r : rows) {
    const double acc_m = mean_of(r.accuracy_runs);
    const double acc_s = sample_std(r.accuracy_runs);
    const double pr = r.precision + r.recall;
    const double f = pr == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / pr;
    csv << level_name(r.level) << "," << fmt2(acc_m) << "," << fmt2(acc_s) << ","
        << fmt2(r.precision) << "," << fmt2(r.recall) << "," << fmt2(f) << "\n";

    const double sq_m = r.seq_accuracy_runs.empty() ? 0.0 : mean_of(r.seq_accuracy_runs);
    const double sq_s =
        r.seq_accuracy_runs.size() < 2 ? 0.0 : sample_std(r.seq_accuracy_runs);
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %6s +/- %-6s  %6s +/- %-6s  %9s  %6s  %9s\n",
                  level_name(r.level).c_str(), fmt2(acc_m).c_str(), fmt2(acc_s).c_str(),
                  fmt2(sq_m).c_str(), fmt2(sq_s).c_str(), fmt2(r.precision).c_str(),
                  fmt2(r.recall).c_str(), fmt2(f).c_str());
    txt << line;
  }
  if (!csv || !txt) throw std::runtime_error("report_levels: write failed");
}

}  // namespace ptx
