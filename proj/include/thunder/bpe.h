// Copyright 2026 The thunder-tok Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef THUNDER_BPE_H_
#define THUNDER_BPE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "thunder/corpus.h"
#include "thunder/pretokenizer.h"
#include "thunder/vocabulary.h"

namespace thunder {

struct Model;

// Ordered byte-level merge rules with a rank table for encoding.
class BpeMerges {
 public:
  using Pair = std::pair<std::string, std::string>;

  BpeMerges() = default;
  // Every merge result must be a token of `vocab`; throws Error otherwise.
  BpeMerges(std::vector<Pair> merges, const Vocabulary& vocab);

  const std::vector<Pair>& pairs() const { return pairs_; }
  size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  // Starts from single bytes and repeatedly merges the adjacent pair with
  // the lowest rank, all of its leftmost non-overlapping occurrences at
  // once. Equivalent to replaying the merge list in order.
  std::vector<TokenId> Apply(std::string_view chunk) const;

 private:
  struct Rule {
    uint32_t rank;
    TokenId merged;
  };
  static uint64_t Key(TokenId left, TokenId right) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(left)) << 32) |
           static_cast<uint32_t>(right);
  }

  std::vector<Pair> pairs_;
  std::unordered_map<uint64_t, Rule> rules_;
};

struct BpeConfig {
  size_t vocab_size = 8192;
  PretokMode pretok = PretokMode::kGpt2;
  // Merging stops once the most frequent pair occurs fewer times.
  uint64_t min_frequency = 2;
  Normalization normalization = Normalization::kNone;
  std::ostream* log = nullptr;
};

// Greedy most-frequent-pair merging within pre-tokens weighted by their
// counts. Frequency ties go to the byte-wise smaller (left, right) pair.
// A merge whose result already exists reuses that token, so the vocabulary
// holds 256 + (number of distinct merge results) tokens.
Model BpeTrain(const BpeConfig& config, const SentenceTable& sentences);

}  // namespace thunder

#endif  // THUNDER_BPE_H_
