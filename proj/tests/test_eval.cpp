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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ptx/eval.h"
#include "ptx/rng.h"

using namespace ptx;
namespace fs = std::filesystem;

namespace {

std::vector<int> seq(const std::string& s) { return std::vector<int>(s.begin(), s.end()); }

std::vector<int> random_seq(Rng& rng, int max_len, int sym_count) {
  std::vector<int> out(rng.below(max_len + 1));
  for (int& v : out) v = 1 + static_cast<int>(rng.below(sym_count));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein(seq("abc"), seq("abc")) == 0);
  CHECK(levenshtein(seq("abc"), seq("")) == 3);
  CHECK(levenshtein(seq(""), seq("ab")) == 2);
  CHECK(levenshtein(seq("kitten"), seq("sitting")) == 3);
}

TEST_CASE("levenshtein satisfies the metric axioms on random pairs") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_seq(rng, 8, 4);
    const auto b = random_seq(rng, 8, 4);
    const auto c = random_seq(rng, 8, 4);
    const int dab = levenshtein(a, b);
    CHECK(dab == levenshtein(b, a));
    CHECK((dab == 0) == (a == b));
    CHECK(dab <= levenshtein(a, c) + levenshtein(c, b));
  }
}

TEST_CASE("character_error_rate") {
  CHECK(character_error_rate({{seq("abc"), seq("abc")}, {seq("de"), seq("de")}}) ==
        doctest::Approx(0.0));
  CHECK(character_error_rate({{seq("ab"), seq("")}}) == doctest::Approx(1.0));
  CHECK(character_error_rate({{seq("abc"), seq("axc")}, {seq("de"), seq("de")}}) ==
        doctest::Approx(0.2));
  CHECK_THROWS(character_error_rate({{seq(""), seq("x")}}));
}

TEST_CASE("precision_recall_f on perfect hypotheses") {
  const PRF prf = precision_recall_f({{seq("abc"), seq("abc")}});
  CHECK(prf.precision == doctest::Approx(1.0));
  CHECK(prf.recall == doctest::Approx(1.0));
  CHECK(prf.f_measure == doctest::Approx(1.0));
}

TEST_CASE("alignment matches are bounded and tie-broken toward matches") {
  CHECK(alignment_matches(seq("ab"), seq("ba")) == 1);
  CHECK(alignment_matches(seq("abc"), seq("axc")) == 2);
  CHECK(alignment_matches(seq("abc"), seq("")) == 0);

  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_seq(rng, 9, 3);
    const auto b = random_seq(rng, 9, 3);
    const int m = alignment_matches(a, b);
    CHECK(m >= 0);
    CHECK(m <= static_cast<int>(std::min(a.size(), b.size())));
  }
}

TEST_CASE("precision and recall never exceed 1") {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SeqPair> pairs;
    for (int i = 0; i < 4; ++i) {
      auto ref = random_seq(rng, 6, 3);
      if (ref.empty()) ref.push_back(1);
      pairs.emplace_back(ref, random_seq(rng, 6, 3));
    }
    const PRF prf = precision_recall_f(pairs);
    CHECK(prf.precision <= 1.0);
    CHECK(prf.recall <= 1.0);
    const double pr = prf.precision + prf.recall;
    const double expect_f = pr == 0 ? 0.0 : 2 * prf.precision * prf.recall / pr;
    CHECK(prf.f_measure == doctest::Approx(expect_f));
  }
}

TEST_CASE("report_levels emits the pinned CSV layout") {
  LevelResult l0;
  l0.level = 0;
  l0.accuracy_runs = {77.30, 77.30};
  l0.seq_accuracy_runs = {50.0, 50.0};
  l0.precision = 0.82;
  l0.recall = 0.74;

  LevelResult l1;
  l1.level = 1;
  l1.accuracy_runs = {73.0, 74.0};
  l1.seq_accuracy_runs = {40.0, 42.0};
  l1.precision = 0.60;
  l1.recall = 0.47;

  LevelResult whole;
  whole.level = -1;
  whole.accuracy_runs = {82.0, 83.0};
  whole.seq_accuracy_runs = {60.0, 61.0};
  whole.precision = 0.9;
  whole.recall = 0.85;

  const std::string csv_path =
      (fs::temp_directory_path() / "ptx_t_report.csv").string();
  report_levels({whole, l1, l0}, csv_path);  // order must not matter

  std::istringstream csv(read_file(csv_path));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "level,accuracy_mean,accuracy_std,precision,recall,f_measure");
  std::getline(csv, line);
  CHECK(line == "0,77.30,0.00,0.82,0.74,0.78");  // paper-style F at 2 decimals
  std::getline(csv, line);
  CHECK(line == "1,73.50,0.71,0.60,0.47,0.53");
  std::getline(csv, line);
  CHECK(line.substr(0, 6) == "whole,");

  const std::string txt = read_file(
      (fs::temp_directory_path() / "ptx_t_report.txt").string());
  CHECK(txt.find("77.30 +/- 0.00") != std::string::npos);
  CHECK(txt.find("whole") != std::string::npos);
}

TEST_CASE("report_levels requires two repetitions") {
  LevelResult r;
  r.level = 0;
  r.accuracy_runs = {50.0};
  const std::string path = (fs::temp_directory_path() / "ptx_t_report2.csv").string();
  CHECK_THROWS(report_levels({r}, path));
  CHECK_THROWS(report_levels({}, path));
}
