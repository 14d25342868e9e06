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

#ifndef THUNDER_VOCABULARY_H_
#define THUNDER_VOCABULARY_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thunder {

using TokenId = int32_t;

struct Token {
  std::string bytes;
  double log_prob = 0.0;
  bool is_protected = false;
  std::optional<double> score;
};

// Immutable byte trie over token strings for common-prefix search.
class PrefixIndex {
 public:
  PrefixIndex() = default;
  explicit PrefixIndex(const std::vector<Token>& tokens);

  // Calls fn(length, id) for every token that is a prefix of
  // text.substr(pos), in increasing length.
  template <typename Fn>
  void CommonPrefixSearch(std::string_view text, size_t pos, Fn&& fn) const {
    if (nodes_.empty()) return;
    uint32_t node = 0;
    for (size_t i = pos; i < text.size(); ++i) {
      node = Child(node, static_cast<unsigned char>(text[i]));
      if (node == kNone) return;
      if (nodes_[node].token >= 0) fn(i + 1 - pos, nodes_[node].token);
    }
  }

  // Exact lookup.
  std::optional<TokenId> Find(std::string_view bytes) const;

  size_t node_count() const { return nodes_.size(); }

 private:
  static constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();
  struct Node {
    TokenId token = -1;
    uint32_t child_begin = 0;
    uint32_t child_end = 0;
  };
  uint32_t Child(uint32_t node, unsigned char label) const;

  std::vector<Node> nodes_;
  std::vector<unsigned char> labels_;  // parallel to child slots
  std::vector<uint32_t> targets_;
};

// Id-indexed token table. Ids 0..255 are the single bytes in byte order and
// are protected from pruning.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws Error when byte tokens are missing or misplaced or when two
  // tokens share the same bytes.
  explicit Vocabulary(std::vector<Token> tokens);

  // 256 protected bytes with uniform probability.
  static Vocabulary ByteLevel();

  size_t size() const { return tokens_.size(); }
  const Token& token(TokenId id) const { return tokens_[id]; }
  const std::vector<Token>& tokens() const { return tokens_; }
  std::optional<TokenId> Find(std::string_view bytes) const;
  const PrefixIndex& index() const { return index_; }
  size_t max_token_bytes() const { return max_token_bytes_; }

  void set_log_prob(TokenId id, double value) { tokens_[id].log_prob = value; }
  void set_score(TokenId id, std::optional<double> value) {
    tokens_[id].score = value;
  }

 private:
  std::vector<Token> tokens_;
  PrefixIndex index_;
  size_t max_token_bytes_ = 0;
};

}  // namespace thunder

#endif  // THUNDER_VOCABULARY_H_
