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

#include "thunder/bpe.h"

#include <algorithm>
#include <limits>
#include <ostream>
#include <queue>
#include <tuple>
#include <unordered_set>

#include "thunder/errors.h"
#include "thunder/model.h"

namespace thunder {

BpeMerges::BpeMerges(std::vector<Pair> merges, const Vocabulary& vocab)
    : pairs_(std::move(merges)) {
  rules_.reserve(pairs_.size());
  for (uint32_t rank = 0; rank < pairs_.size(); ++rank) {
    const auto& [left, right] = pairs_[rank];
    const auto l = vocab.Find(left);
    const auto r = vocab.Find(right);
    const auto m = vocab.Find(left + right);
    if (!l || !r || !m) {
      throw Error("merge " + std::to_string(rank) +
                  " refers to a token missing from the vocabulary");
    }
    // A repeated pair can never fire after its first rank.
    rules_.try_emplace(Key(*l, *r), Rule{rank, *m});
  }
}

std::vector<TokenId> BpeMerges::Apply(std::string_view chunk) const {
  std::vector<TokenId> symbols;
  symbols.reserve(chunk.size());
  for (const char c : chunk) symbols.push_back(static_cast<unsigned char>(c));
  if (rules_.empty()) return symbols;

  int64_t applied = -1;  // rank of the last merge replayed
  std::vector<TokenId> next;
  while (symbols.size() > 1) {
    uint32_t best_rank = std::numeric_limits<uint32_t>::max();
    TokenId left = -1, right = -1, merged = -1;
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = rules_.find(Key(symbols[i], symbols[i + 1]));
      if (it == rules_.end()) continue;
      const Rule& rule = it->second;
      if (static_cast<int64_t>(rule.rank) <= applied || rule.rank >= best_rank) {
        continue;
      }
      best_rank = rule.rank;
      left = symbols[i];
      right = symbols[i + 1];
      merged = rule.merged;
    }
    if (merged < 0) break;
    next.clear();
    for (size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
        next.push_back(merged);
        i += 2;
      } else {
        next.push_back(symbols[i]);
        ++i;
      }
    }
    symbols.swap(next);
    applied = best_rank;
  }
  return symbols;
}

namespace {

uint64_t PairKey(TokenId l, TokenId r) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(l)) << 32) |
         static_cast<uint32_t>(r);
}

}  // namespace

Model BpeTrain(const BpeConfig& config, const SentenceTable& sentences) {
  if (config.vocab_size < 257) {
    throw ConfigError("vocab_size must be at least 257 (256 bytes + 1)");
  }
  if (sentences.total_count == 0) throw Error("empty corpus");
  const ChunkTable chunks = BuildChunkTable(sentences, config.pretok);

  std::vector<std::string> token_bytes;
  std::unordered_map<std::string, TokenId> token_ids;
  for (int b = 0; b < 256; ++b) {
    token_bytes.emplace_back(1, static_cast<char>(b));
    token_ids.emplace(token_bytes.back(), b);
  }

  struct Word {
    std::vector<TokenId> symbols;
    int64_t count;
  };
  std::vector<Word> words;
  words.reserve(chunks.size());
  for (const auto& c : chunks.chunks) {
    Word w{{}, static_cast<int64_t>(c.count)};
    for (const char ch : c.text) w.symbols.push_back(static_cast<unsigned char>(ch));
    words.push_back(std::move(w));
  }

  std::unordered_map<uint64_t, int64_t> pair_counts;
  std::unordered_map<uint64_t, std::vector<uint32_t>> where;
  for (uint32_t w = 0; w < words.size(); ++w) {
    const auto& s = words[w].symbols;
    for (size_t i = 0; i + 1 < s.size(); ++i) {
      const uint64_t key = PairKey(s[i], s[i + 1]);
      pair_counts[key] += words[w].count;
      auto& list = where[key];
      if (list.empty() || list.back() != w) list.push_back(w);
    }
  }

  struct Entry {
    int64_t count;
    TokenId left, right;
  };
  // Max-heap on count; ties prefer the byte-wise smaller pair.
  auto lower = [&](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count < b.count;
    const auto& al = token_bytes[a.left];
    const auto& bl = token_bytes[b.left];
    if (al != bl) return al > bl;
    return token_bytes[a.right] > token_bytes[b.right];
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  for (const auto& [key, count] : pair_counts) {
    heap.push({count, static_cast<TokenId>(key >> 32),
               static_cast<TokenId>(key & 0xFFFFFFFFu)});
  }

  std::vector<BpeMerges::Pair> merges;
  std::unordered_set<uint64_t> touched;
  std::vector<TokenId> merged_symbols;
  while (token_bytes.size() < config.vocab_size && !heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    const uint64_t key = PairKey(top.left, top.right);
    const auto pc = pair_counts.find(key);
    if (pc == pair_counts.end() || pc->second != top.count) continue;  // stale
    if (top.count < static_cast<int64_t>(std::max<uint64_t>(config.min_frequency, 1))) {
      break;
    }

    const std::string joined = token_bytes[top.left] + token_bytes[top.right];
    auto [it, inserted] =
        token_ids.try_emplace(joined, static_cast<TokenId>(token_bytes.size()));
    if (inserted) token_bytes.push_back(joined);
    const TokenId merged = it->second;
    merges.emplace_back(token_bytes[top.left], token_bytes[top.right]);

    touched.clear();
    std::vector<uint32_t> affected;
    affected.swap(where[key]);
    for (const uint32_t w : affected) {
      Word& word = words[w];
      auto& s = word.symbols;
      bool present = false;
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == top.left && s[i + 1] == top.right) {
          present = true;
          break;
        }
      }
      if (!present) continue;
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        const uint64_t k = PairKey(s[i], s[i + 1]);
        pair_counts[k] -= word.count;
        touched.insert(k);
      }
      merged_symbols.clear();
      for (size_t i = 0; i < s.size();) {
        if (i + 1 < s.size() && s[i] == top.left && s[i + 1] == top.right) {
          merged_symbols.push_back(merged);
          i += 2;
        } else {
          merged_symbols.push_back(s[i]);
          ++i;
        }
      }
      s.swap(merged_symbols);
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        const uint64_t k = PairKey(s[i], s[i + 1]);
        pair_counts[k] += word.count;
        touched.insert(k);
        auto& list = where[k];
        if (list.empty() || list.back() != w) list.push_back(w);
      }
    }
    // Push in a fixed order; heap ties are fully ordered anyway.
    std::vector<uint64_t> keys(touched.begin(), touched.end());
    std::sort(keys.begin(), keys.end());
    for (const uint64_t k : keys) {
      const int64_t c = pair_counts[k];
      if (c <= 0) {
        pair_counts.erase(k);
        continue;
      }
      heap.push({c, static_cast<TokenId>(k >> 32),
                 static_cast<TokenId>(k & 0xFFFFFFFFu)});
    }
    if (config.log && merges.size() % 1000 == 0) {
      *config.log << "bpe merges=" << merges.size()
                  << " |V|=" << token_bytes.size() << "\n";
    }
  }

  std::vector<Token> tokens;
  tokens.reserve(token_bytes.size());
  for (size_t i = 0; i < token_bytes.size(); ++i) {
    tokens.push_back({token_bytes[i], 0.0, i < 256, std::nullopt});
  }
  Model model;
  model.kind = ModelKind::kBpe;
  model.pretok = config.pretok;
  model.normalization = config.normalization;
  model.config["algo"] = "bpe";
  model.config["vocab_size"] = config.vocab_size;
  model.config["min_frequency"] = config.min_frequency;
  model.vocab = CanonicalizeIds(Vocabulary(std::move(tokens)));
  model.merges = BpeMerges(std::move(merges), model.vocab);
  return model;
}

}  // namespace thunder
