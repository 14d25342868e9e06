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

#ifndef THUNDER_TESTS_ORACLE_BRUTE_FORCE_H_
#define THUNDER_TESTS_ORACLE_BRUTE_FORCE_H_

// Exhaustive-enumeration reference implementations. Everything here works
// in linear probability space over explicit segmentation lists and shares no
// code with the lattice algorithms it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thunder/lattice.h"
#include "thunder/vocabulary.h"

namespace thunder::oracle {

struct OracleToken {
  TokenId id;
  std::string bytes;
  double prob;  // linear probability; 0 means the token carries no mass
};

struct Segmentation {
  std::vector<TokenId> tokens;
  std::vector<size_t> lengths;
  double prob = 1.0;
};

// Every way of writing `text` as a sequence of positive-probability tokens.
inline std::vector<Segmentation> Enumerate(std::string_view text,
                                           const std::vector<OracleToken>& vocab) {
  std::vector<Segmentation> out;
  Segmentation current;
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == text.size()) {
      out.push_back(current);
      return;
    }
    for (const auto& t : vocab) {
      if (t.prob <= 0.0 || t.bytes.empty()) continue;
      if (text.compare(pos, t.bytes.size(), t.bytes) != 0) continue;
      const double saved = current.prob;
      current.tokens.push_back(t.id);
      current.lengths.push_back(t.bytes.size());
      current.prob *= t.prob;
      self(self, pos + t.bytes.size());
      current.prob = saved;
      current.tokens.pop_back();
      current.lengths.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline bool Uses(const Segmentation& s, TokenId id) {
  return std::find(s.tokens.begin(), s.tokens.end(), id) != s.tokens.end();
}

inline double Z(const std::vector<Segmentation>& segs) {
  double z = 0.0;
  for (const auto& s : segs) z += s.prob;
  return z;
}

inline double ZExcluding(const std::vector<Segmentation>& segs, TokenId id) {
  double z = 0.0;
  for (const auto& s : segs) {
    if (!Uses(s, id)) z += s.prob;
  }
  return z;
}

inline double LogOf(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

// Posterior expected occurrences per token id (only ids that occur).
inline std::map<TokenId, double> ExpectedCounts(const std::vector<Segmentation>& segs) {
  std::map<TokenId, double> counts;
  const double z = Z(segs);
  if (z <= 0.0) return counts;
  for (const auto& s : segs) {
    for (const TokenId t : s.tokens) counts[t] += s.prob / z;
  }
  return counts;
}

// Probability that a random segmentation avoids `id`.
inline double AbsentProbability(const std::vector<Segmentation>& segs, TokenId id) {
  return ZExcluding(segs, id) / Z(segs);
}

// Highest-probability segmentation. Among paths whose log probability is
// within `tie` of the best: fewer tokens, then at the first differing
// position the longer piece, then the lower id.
inline const Segmentation* Best(const std::vector<Segmentation>& segs,
                                double tie = 0.0) {
  if (segs.empty()) return nullptr;
  double best_lp = -std::numeric_limits<double>::infinity();
  for (const auto& s : segs) best_lp = std::max(best_lp, LogOf(s.prob));
  const Segmentation* best = nullptr;
  for (const auto& s : segs) {
    if (LogOf(s.prob) < best_lp - tie) continue;
    if (best == nullptr) {
      best = &s;
      continue;
    }
    if (s.tokens.size() != best->tokens.size()) {
      if (s.tokens.size() < best->tokens.size()) best = &s;
      continue;
    }
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      if (s.lengths[i] != best->lengths[i]) {
        if (s.lengths[i] > best->lengths[i]) best = &s;
        break;
      }
      if (s.tokens[i] != best->tokens[i]) {
        if (s.tokens[i] < best->tokens[i]) best = &s;
        break;
      }
    }
  }
  return best;
}

// Gap between the best and the second-best distinct path probability, in
// log space; +inf when there is a single path.
inline double LogMargin(const std::vector<Segmentation>& segs) {
  std::vector<double> lps;
  for (const auto& s : segs) lps.push_back(LogOf(s.prob));
  std::sort(lps.rbegin(), lps.rend());
  if (lps.size() < 2) return std::numeric_limits<double>::infinity();
  return lps[0] - lps[1];
}

// P(x in y) for a sentence given as the list of its chunk occurrences
// (repeats expanded). Segmentations of distinct occurrences are independent,
// so the joint space is the cartesian product; it is walked explicitly.
inline std::map<TokenId, double> SentenceContainment(
    const std::vector<std::string>& occurrences,
    const std::vector<OracleToken>& vocab) {
  std::vector<std::vector<Segmentation>> per;
  for (const auto& c : occurrences) per.push_back(Enumerate(c, vocab));
  std::map<TokenId, double> with;
  double total = 0.0;
  std::vector<size_t> pick(per.size(), 0);
  for (const auto& p : per) {
    if (p.empty()) return {};
  }
  for (;;) {
    double prob = 1.0;
    std::vector<TokenId> used;
    for (size_t i = 0; i < per.size(); ++i) {
      const Segmentation& s = per[i][pick[i]];
      prob *= s.prob;
      used.insert(used.end(), s.tokens.begin(), s.tokens.end());
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    total += prob;
    for (const TokenId t : used) with[t] += prob;
    size_t k = 0;
    while (k < per.size() && ++pick[k] == per[k].size()) pick[k++] = 0;
    if (k == per.size()) break;
  }
  for (auto& [t, p] : with) p /= total;
  return with;
}

struct BranchingOracle {
  double marginal = 0.0;
  double entropy = 0.0;
  double score = 0.0;
};

// Direct two-pass evaluation: P(x), explicit posteriors P(y|x), their
// entropy, and the product score.
inline BranchingOracle Branching(const std::vector<double>& priors,
                                 const std::vector<double>& containment) {
  BranchingOracle r;
  for (size_t y = 0; y < priors.size(); ++y) r.marginal += priors[y] * containment[y];
  if (r.marginal <= 0.0) return r;
  for (size_t y = 0; y < priors.size(); ++y) {
    const double post = priors[y] * containment[y] / r.marginal;
    if (post > 0.0) r.entropy -= post * std::log(post);
  }
  r.score = r.entropy * r.marginal;
  return r;
}

// Small random vocabularies over a short alphabet.
struct RandomVocab {
  std::vector<OracleToken> tokens;  // ids are byte values for single bytes
  Vocabulary vocab;                 // 256 bytes (massless unless listed) + extras
};

inline RandomVocab MakeRandomVocab(std::mt19937_64& rng, std::string_view alphabet,
                                   size_t max_tokens, size_t max_len,
                                   bool cover_alphabet) {
  std::uniform_real_distribution<double> prob(0.02, 1.0);
  std::map<std::string, double> chosen;
  if (cover_alphabet) {
    for (const char c : alphabet) chosen[std::string(1, c)] = prob(rng);
  }
  std::uniform_int_distribution<size_t> len(1, max_len);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  for (int attempt = 0; attempt < 64 && chosen.size() < max_tokens; ++attempt) {
    std::string s;
    const size_t n = len(rng);
    for (size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
    chosen.emplace(s, prob(rng));
  }
  while (chosen.size() > max_tokens) chosen.erase(std::prev(chosen.end()));

  std::vector<Token> tokens;
  for (int b = 0; b < 256; ++b) {
    tokens.push_back({std::string(1, static_cast<char>(b)), kLogZero, true, std::nullopt});
  }
  RandomVocab out;
  for (const auto& [bytes, p] : chosen) {
    if (bytes.size() == 1) {
      const auto b = static_cast<unsigned char>(bytes[0]);
      tokens[b].log_prob = std::log(p);
      out.tokens.push_back({static_cast<TokenId>(b), bytes, p});
    } else {
      out.tokens.push_back({static_cast<TokenId>(tokens.size()), bytes, p});
      tokens.push_back({bytes, std::log(p), false, std::nullopt});
    }
  }
  out.vocab = Vocabulary(std::move(tokens));
  return out;
}

inline std::string RandomText(std::mt19937_64& rng, std::string_view alphabet,
                              size_t min_len, size_t max_len) {
  std::uniform_int_distribution<size_t> len(min_len, max_len);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::string s;
  const size_t n = len(rng);
  for (size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
  return s;
}

}  // namespace thunder::oracle

#endif  // THUNDER_TESTS_ORACLE_BRUTE_FORCE_H_
