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

#ifndef PYRATEXT_ALPHABET_H_
#define PYRATEXT_ALPHABET_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptx {

// Label alphabet with the CTC blank reserved at index 0. Real symbols occupy
// indices 1 .. size()-1 in the order given at construction.
class Alphabet {
 public:
  static constexpr int kBlank = 0;

  Alphabet() = default;

  explicit Alphabet(std::vector<uint32_t> symbols) : symbols_(std::move(symbols)) {
    for (size_t i = 0; i < symbols_.size(); ++i) {
      if (!index_.emplace(symbols_[i], static_cast<int>(i) + 1).second) {
        throw std::invalid_argument("Alphabet: duplicate symbol");
      }
    }
  }

  // Including the blank.
  int size() const { return static_cast<int>(symbols_.size()) + 1; }

  const std::vector<uint32_t>& symbols() const { return symbols_; }

  uint32_t symbol(int index) const {
    if (index < 1 || index >= size()) {
      throw std::out_of_range("Alphabet: symbol index out of range");
    }
    return symbols_[static_cast<size_t>(index) - 1];
  }

  // 0 if the codepoint is not in the alphabet (0 is never a symbol index).
  int index_of(uint32_t cp) const {
    const auto it = index_.find(cp);
    return it == index_.end() ? 0 : it->second;
  }

  std::vector<int> encode(const std::vector<uint32_t>& text) const {
    std::vector<int> out;
    out.reserve(text.size());
    for (uint32_t cp : text) {
      const int idx = index_of(cp);
      if (idx == 0) throw std::runtime_error("Alphabet: unknown symbol U+" + std::to_string(cp));
      out.push_back(idx);
    }
    return out;
  }

  std::vector<uint32_t> decode(const std::vector<int>& indices) const {
    std::vector<uint32_t> out;
    out.reserve(indices.size());
    for (int idx : indices) out.push_back(symbol(idx));
    return out;
  }

 private:
  std::vector<uint32_t> symbols_;
  std::unordered_map<uint32_t, int> index_;
};

}  // namespace ptx

#endif  // PYRATEXT_ALPHABET_H_
