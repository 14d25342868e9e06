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

#include "thunder/vocabulary.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thunder/errors.h"

namespace thunder {

PrefixIndex::PrefixIndex(const std::vector<Token>& tokens) {
  std::vector<TokenId> order(tokens.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    return tokens[a].bytes < tokens[b].bytes;
  });

  // Each node allocates all of its children at once, so sibling slots are
  // contiguous regardless of the visiting order.
  struct Pending {
    uint32_t node;
    size_t lo, hi, depth;
  };
  nodes_.push_back({});
  std::vector<Pending> stack{{0, 0, order.size(), 0}};
  while (!stack.empty()) {
    auto [node, lo, hi, depth] = stack.back();
    stack.pop_back();
    if (lo < hi && tokens[order[lo]].bytes.size() == depth) {
      if (lo + 1 < hi && tokens[order[lo + 1]].bytes.size() == depth) {
        throw Error("duplicate token in prefix index");
      }
      nodes_[node].token = order[lo];
      ++lo;
    }
    nodes_[node].child_begin = static_cast<uint32_t>(labels_.size());
    size_t i = lo;
    while (i < hi) {
      const unsigned char label =
          static_cast<unsigned char>(tokens[order[i]].bytes[depth]);
      size_t j = i + 1;
      while (j < hi &&
             static_cast<unsigned char>(tokens[order[j]].bytes[depth]) == label) {
        ++j;
      }
      const auto child = static_cast<uint32_t>(nodes_.size());
      nodes_.push_back({});
      labels_.push_back(label);
      targets_.push_back(child);
      stack.push_back({child, i, j, depth + 1});
      i = j;
    }
    nodes_[node].child_end = static_cast<uint32_t>(labels_.size());
  }
}

uint32_t PrefixIndex::Child(uint32_t node, unsigned char label) const {
  const Node& n = nodes_[node];
  const auto* begin = labels_.data() + n.child_begin;
  const auto* end = labels_.data() + n.child_end;
  const auto* it = std::lower_bound(begin, end, label);
  if (it == end || *it != label) return kNone;
  return targets_[it - labels_.data()];
}

std::optional<TokenId> PrefixIndex::Find(std::string_view bytes) const {
  if (nodes_.empty()) return std::nullopt;
  uint32_t node = 0;
  for (const char c : bytes) {
    node = Child(node, static_cast<unsigned char>(c));
    if (node == kNone) return std::nullopt;
  }
  if (nodes_[node].token < 0) return std::nullopt;
  return nodes_[node].token;
}

Vocabulary::Vocabulary(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 256) throw Error("vocabulary lacks the 256 byte tokens");
  for (size_t b = 0; b < 256; ++b) {
    const Token& t = tokens_[b];
    if (t.bytes.size() != 1 || static_cast<unsigned char>(t.bytes[0]) != b) {
      throw Error("byte token " + std::to_string(b) + " missing or misplaced");
    }
  }
  for (size_t i = 256; i < tokens_.size(); ++i) {
    if (tokens_[i].bytes.size() < 2) {
      throw Error("duplicate single-byte token at id " + std::to_string(i));
    }
  }
  index_ = PrefixIndex(tokens_);  // rejects duplicates
  for (const Token& t : tokens_) {
    max_token_bytes_ = std::max(max_token_bytes_, t.bytes.size());
  }
}

Vocabulary Vocabulary::ByteLevel() {
  std::vector<Token> tokens(256);
  for (size_t b = 0; b < 256; ++b) {
    tokens[b].bytes.assign(1, static_cast<char>(b));
    tokens[b].log_prob = -std::log(256.0);
    tokens[b].is_protected = true;
  }
  return Vocabulary(std::move(tokens));
}

std::optional<TokenId> Vocabulary::Find(std::string_view bytes) const {
  return index_.Find(bytes);
}

}  // namespace thunder
