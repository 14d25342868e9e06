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

#ifndef THUNDER_TRAINER_H_
#define THUNDER_TRAINER_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "thunder/corpus.h"
#include "thunder/model.h"
#include "thunder/unit_filter.h"
#include "thunder/vocabulary.h"

namespace thunder {

enum class ScoringMode { kBranchingEntropy, kLikelihood };
// How P(x|y) is obtained: exactly from token-excluded partition functions,
// or approximated by min(1, expected count).
enum class ContainmentMode { kExact, kApprox };

std::string_view ToString(ScoringMode mode);
std::string_view ToString(ContainmentMode mode);
ScoringMode ParseScoringMode(std::string_view name);
ContainmentMode ParseContainmentMode(std::string_view name);

struct TrainerConfig {
  size_t vocab_size = 8192;
  PretokMode pretok = PretokMode::kThunder;
  SeedMode seed_mode = SeedMode::kLanguageAware;
  ScoringMode scoring = ScoringMode::kBranchingEntropy;
  size_t max_token_bytes = 32;
  size_t seed_cap = 1000000;
  double shrink_factor = 0.75;
  int em_iters_per_round = 2;
  int final_em_iters = 2;
  ContainmentMode containment = ContainmentMode::kExact;
  // Single characters go only after every longer token has been pruned.
  bool keep_characters = true;
  Normalization normalization = Normalization::kNone;
  int threads = 0;              // 0: hardware concurrency
  std::ostream* log = nullptr;  // one progress line per round

  // Throws ConfigError.
  void Validate() const;
  // Settings that determine the model; thread count and log sink excluded.
  nlohmann::ordered_json Echo() const;
};

// Lowest log probability a protected byte token can take. Plain maximum
// likelihood drives the probability of bytes that are always covered by
// longer tokens to zero within a few iterations, after which pruning those
// longer tokens would leave text without any segmentation.
inline constexpr double kProtectedLogFloor = -600.0;

// Seed candidates become tokens 256.. with P(t) proportional to their
// counts; bytes get their raw corpus frequency.
Vocabulary InitialVocabulary(const SeedVocabulary& seed);

// Runs `iters` EM iterations in place and returns the corpus
// log-likelihood sum_c count(c) * log Z(c) seen by each E-step. The M-step
// sets P(t) = c(t) / sum c; protected tokens are then raised to at least
// kProtectedLogFloor.
std::vector<double> EmFit(Vocabulary* vocab, const ChunkTable& chunks,
                          int iters, int threads = 1);

using SparseRow = std::vector<std::pair<TokenId, double>>;

// P(x|y) for every sentence y and every token x with mass in one of y's
// chunk lattices; rows sorted by token. Byte tokens are skipped unless
// `include_protected` is set.
std::vector<SparseRow> ContainmentMarginals(const Vocabulary& vocab,
                                            const SentenceTable& sentences,
                                            const ChunkTable& chunks,
                                            ContainmentMode mode,
                                            int threads = 1,
                                            bool include_protected = true);

// Per-token statistics, indexed by token id. `marginal` is P(x) and
// `entropy` the branching entropy; both stay 0 under likelihood scoring.
struct ScoreTable {
  std::vector<double> marginal;
  std::vector<double> entropy;
  std::vector<double> score;

  explicit ScoreTable(size_t n = 0) : marginal(n), entropy(n), score(n) {}
};

// Streams sentence rows into branching-entropy scores:
//   P(x) = sum_y P(y) P(x|y),  P(y|x) = P(y) P(x|y) / P(x),
//   BE(x) = -sum_y P(y|x) ln P(y|x),  score = BE(x) * P(x).
class BranchingAccumulator {
 public:
  explicit BranchingAccumulator(size_t vocab_size)
      : mass_(vocab_size), mass_log_mass_(vocab_size) {}
  void Add(double sentence_prior, const SparseRow& row);
  ScoreTable Finish() const;

 private:
  std::vector<double> mass_;           // sum of w = P(y) P(x|y)
  std::vector<double> mass_log_mass_;  // sum of w ln w
};

ScoreTable BranchingScores(const std::vector<SparseRow>& marginals,
                           const SentenceTable& sentences, size_t vocab_size);

// Loss of removing each token: sum_c count(c) (log Z(c) - log Z_excl(c)).
// +inf when removal leaves some chunk without a segmentation.
ScoreTable LikelihoodScores(const Vocabulary& vocab, const ChunkTable& chunks,
                            int threads = 1);

// Size after one pruning round.
size_t NextVocabSize(size_t current, double shrink_factor, size_t target);

// True for a multi-byte token that is exactly one UTF-8 scalar.
bool IsSingleCharacter(std::string_view bytes);

// Drops the lowest-scoring unprotected tokens (ties: shorter first, then
// larger bytes first) and renormalizes the rest. With `keep_characters`,
// single characters rank after all longer tokens. Token scores are recorded
// on the survivors.
Vocabulary PruneRound(const Vocabulary& vocab, const ScoreTable& scores,
                      double shrink_factor, size_t target,
                      bool keep_characters = false);

// Full pipeline: pre-tokenize, seed, EM + score + prune until the target
// size, final EM, canonical ids.
Model Train(const TrainerConfig& config, const SentenceTable& sentences);
Model Train(const TrainerConfig& config, const std::vector<std::string>& paths);

}  // namespace thunder

#endif  // THUNDER_TRAINER_H_
