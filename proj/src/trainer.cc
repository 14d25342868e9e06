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

#include "thunder/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

#include "parallel.h"
#include "thunder/errors.h"
#include "thunder/lattice.h"
#include "thunder/unicode.h"

namespace thunder {

std::string_view ToString(ScoringMode mode) {
  return mode == ScoringMode::kBranchingEntropy ? "branching-entropy"
                                                : "likelihood";
}

std::string_view ToString(ContainmentMode mode) {
  return mode == ContainmentMode::kExact ? "exact" : "approx";
}

ScoringMode ParseScoringMode(std::string_view name) {
  if (name == "branching-entropy" || name == "branching_entropy") {
    return ScoringMode::kBranchingEntropy;
  }
  if (name == "likelihood") return ScoringMode::kLikelihood;
  throw ConfigError("unknown scoring mode: " + std::string(name));
}

ContainmentMode ParseContainmentMode(std::string_view name) {
  if (name == "exact") return ContainmentMode::kExact;
  if (name == "approx") return ContainmentMode::kApprox;
  throw ConfigError("unknown containment mode: " + std::string(name));
}

void TrainerConfig::Validate() const {
  if (vocab_size < 257) {
    throw ConfigError("vocab_size must be at least 257 (256 bytes + 1)");
  }
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    throw ConfigError("shrink_factor must lie in (0, 1)");
  }
  if (em_iters_per_round < 1 || final_em_iters < 1) {
    throw ConfigError("EM iteration counts must be at least 1");
  }
  if (max_token_bytes < 1) throw ConfigError("max_token_bytes must be >= 1");
  if (seed_cap < 1) throw ConfigError("seed_cap must be >= 1");
}

nlohmann::ordered_json TrainerConfig::Echo() const {
  nlohmann::ordered_json j;
  j["vocab_size"] = vocab_size;
  j["seed"] = ToString(seed_mode);
  j["scoring"] = ToString(scoring);
  j["max_token_bytes"] = max_token_bytes;
  j["seed_cap"] = seed_cap;
  j["shrink_factor"] = shrink_factor;
  j["em_iters_per_round"] = em_iters_per_round;
  j["final_em_iters"] = final_em_iters;
  j["containment"] = ToString(containment);
  j["keep_characters"] = keep_characters;
  return j;
}

namespace {

constexpr size_t kBlockSize = 1024;

// Compensated summation; keeps corpus log-likelihoods comparable across
// iterations down to rounding of the individual terms.
class KahanSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Runs fn(chunk_id, marginals) for every chunk in id order; the marginals
// themselves are computed in parallel one block at a time.
template <typename Fn>
void ForEachChunkMarginals(const Vocabulary& vocab, const ChunkTable& chunks,
                           bool with_absence, bool skip_protected, int threads,
                           Fn&& fn) {
  std::function<bool(TokenId)> skip;
  if (skip_protected) {
    skip = [&vocab](TokenId t) { return vocab.token(t).is_protected; };
  }
  std::vector<LatticeMarginals> block;
  for (size_t base = 0; base < chunks.size(); base += kBlockSize) {
    const size_t n = std::min(kBlockSize, chunks.size() - base);
    block.assign(n, {});
    internal::ParallelFor(n, threads, [&](size_t i) {
      const Lattice lattice = BuildLattice(chunks.chunks[base + i].text, vocab);
      block[i] = ComputeMarginals(lattice, with_absence, skip);
    });
    for (size_t i = 0; i < n; ++i) fn(base + i, block[i]);
  }
}

using ChunkRows = std::vector<SparseRow>;

// Per chunk: (token, log_absent) in exact mode, (token, expected) in
// approximate mode.
ChunkRows ComputeChunkRows(const Vocabulary& vocab, const ChunkTable& chunks,
                           ContainmentMode mode, bool include_protected,
                           int threads) {
  ChunkRows rows(chunks.size());
  const bool exact = mode == ContainmentMode::kExact;
  ForEachChunkMarginals(
      vocab, chunks, exact, !include_protected, threads,
      [&](size_t id, const LatticeMarginals& m) {
        auto& row = rows[id];
        row.reserve(m.tokens.size());
        for (const auto& t : m.tokens) {
          if (!include_protected && vocab.token(t.token).is_protected) continue;
          row.emplace_back(t.token, exact ? t.log_absent : t.expected);
        }
      });
  return rows;
}

SparseRow SentenceRow(const std::vector<ChunkTable::Occurrence>& members,
                      const ChunkRows& chunk_rows, ContainmentMode mode,
                      std::vector<std::pair<TokenId, double>>* scratch) {
  scratch->clear();
  for (const auto& occ : members) {
    for (const auto& [token, value] : chunk_rows[occ.chunk_id]) {
      scratch->emplace_back(token, value * occ.multiplicity);
    }
  }
  std::stable_sort(scratch->begin(), scratch->end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow row;
  for (size_t i = 0; i < scratch->size();) {
    const TokenId token = (*scratch)[i].first;
    double sum = 0.0;
    for (; i < scratch->size() && (*scratch)[i].first == token; ++i) {
      sum += (*scratch)[i].second;
    }
    // Exact: sum is log P(x not in y); approx: expected occurrences.
    const double p = mode == ContainmentMode::kExact ? -std::expm1(sum)
                                                     : std::min(1.0, sum);
    if (p > 0.0) row.emplace_back(token, p);
  }
  return row;
}

}  // namespace

Vocabulary InitialVocabulary(const SeedVocabulary& seed) {
  double total = 0.0;
  for (const uint64_t c : seed.byte_counts) total += static_cast<double>(c);
  for (const auto& c : seed.candidates) total += static_cast<double>(c.count);
  if (total <= 0.0) throw Error("empty corpus");
  const double log_total = std::log(total);

  std::vector<Token> tokens;
  tokens.reserve(seed.size());
  for (size_t b = 0; b < 256; ++b) {
    const uint64_t c = seed.byte_counts[b];
    tokens.push_back({std::string(1, static_cast<char>(b)),
                      c == 0 ? kProtectedLogFloor
                             : std::max(std::log(static_cast<double>(c)) - log_total,
                                        kProtectedLogFloor),
                      true, std::nullopt});
  }
  for (const auto& c : seed.candidates) {
    tokens.push_back({c.bytes, std::log(static_cast<double>(c.count)) - log_total,
                      false, std::nullopt});
  }
  return Vocabulary(std::move(tokens));
}

std::vector<double> EmFit(Vocabulary* vocab, const ChunkTable& chunks,
                          int iters, int threads) {
  if (iters < 1) throw ConfigError("EM needs at least one iteration");
  std::vector<double> log_likelihoods;
  std::vector<double> counts(vocab->size());
  for (int it = 0; it < iters; ++it) {
    std::fill(counts.begin(), counts.end(), 0.0);
    KahanSum log_likelihood;
    ForEachChunkMarginals(
        *vocab, chunks, /*with_absence=*/false, /*skip_protected=*/false,
        threads, [&](size_t id, const LatticeMarginals& m) {
          const auto weight = static_cast<double>(chunks.chunks[id].count);
          if (m.log_z == kLogZero) {
            throw Error("chunk " + std::to_string(id) +
                        " has no segmentation with positive probability");
          }
          log_likelihood.Add(weight * m.log_z);
          for (const auto& t : m.tokens) counts[t.token] += weight * t.expected;
        });
    log_likelihoods.push_back(log_likelihood.value());

    double total = 0.0;
    for (const double c : counts) total += c;
    if (!(total > 0.0)) throw Error("EM produced no expected counts");
    const double log_total = std::log(total);
    for (size_t t = 0; t < counts.size(); ++t) {
      const auto id = static_cast<TokenId>(t);
      double lp = counts[t] > 0.0 ? std::log(counts[t]) - log_total : kLogZero;
      if (vocab->token(id).is_protected) lp = std::max(lp, kProtectedLogFloor);
      vocab->set_log_prob(id, lp);
    }
  }
  return log_likelihoods;
}

std::vector<SparseRow> ContainmentMarginals(const Vocabulary& vocab,
                                            const SentenceTable& sentences,
                                            const ChunkTable& chunks,
                                            ContainmentMode mode, int threads,
                                            bool include_protected) {
  const ChunkRows chunk_rows =
      ComputeChunkRows(vocab, chunks, mode, include_protected, threads);
  std::vector<SparseRow> rows(sentences.size());
  std::vector<std::pair<TokenId, double>> scratch;
  for (size_t s = 0; s < sentences.size(); ++s) {
    rows[s] = SentenceRow(chunks.membership[s], chunk_rows, mode, &scratch);
  }
  return rows;
}

void BranchingAccumulator::Add(double sentence_prior, const SparseRow& row) {
  for (const auto& [token, p] : row) {
    const double w = sentence_prior * p;
    if (!(w > 0.0)) continue;
    mass_[token] += w;
    mass_log_mass_[token] += w * std::log(w);
  }
}

ScoreTable BranchingAccumulator::Finish() const {
  ScoreTable table(mass_.size());
  for (size_t t = 0; t < mass_.size(); ++t) {
    const double px = mass_[t];
    if (!(px > 0.0)) continue;
    // -sum (w/S) ln(w/S) = ln S - (sum w ln w) / S
    const double be = std::max(0.0, std::log(px) - mass_log_mass_[t] / px);
    table.marginal[t] = px;
    table.entropy[t] = be;
    table.score[t] = be * px;
  }
  return table;
}

ScoreTable BranchingScores(const std::vector<SparseRow>& marginals,
                           const SentenceTable& sentences, size_t vocab_size) {
  BranchingAccumulator acc(vocab_size);
  for (size_t s = 0; s < marginals.size(); ++s) {
    acc.Add(sentences.Prior(s), marginals[s]);
  }
  return acc.Finish();
}

ScoreTable LikelihoodScores(const Vocabulary& vocab, const ChunkTable& chunks,
                            int threads) {
  ScoreTable table(vocab.size());
  const double inf = std::numeric_limits<double>::infinity();
  ForEachChunkMarginals(
      vocab, chunks, /*with_absence=*/true, /*skip_protected=*/true, threads,
      [&](size_t id, const LatticeMarginals& m) {
        const auto weight = static_cast<double>(chunks.chunks[id].count);
        for (const auto& t : m.tokens) {
          if (vocab.token(t.token).is_protected) continue;
          if (t.log_absent == kLogZero) {
            table.score[t.token] = inf;
          } else {
            table.score[t.token] -= weight * t.log_absent;
          }
        }
      });
  return table;
}

size_t NextVocabSize(size_t current, double shrink_factor, size_t target) {
  if (target < 257) throw ConfigError("target vocabulary size must be >= 257");
  const auto shrunk = static_cast<size_t>(
      std::floor(static_cast<double>(current) * shrink_factor));
  return std::max({target, shrunk, size_t{257}});
}

bool IsSingleCharacter(std::string_view bytes) {
  char32_t cp = 0;
  return bytes.size() > 1 && unicode::DecodeOne(bytes, 0, &cp) == bytes.size();
}

Vocabulary PruneRound(const Vocabulary& vocab, const ScoreTable& scores,
                      double shrink_factor, size_t target, bool keep_characters) {
  if (vocab.size() <= target) {
    throw ConfigError("vocabulary is already at or below the target size");
  }
  const size_t next = NextVocabSize(vocab.size(), shrink_factor, target);
  const size_t remove = vocab.size() - next;

  std::vector<TokenId> candidates;
  for (size_t t = 0; t < vocab.size(); ++t) {
    if (!vocab.token(static_cast<TokenId>(t)).is_protected) {
      candidates.push_back(static_cast<TokenId>(t));
    }
  }
  std::vector<bool> character(vocab.size(), false);
  if (keep_characters) {
    for (const TokenId t : candidates) character[t] = IsSingleCharacter(vocab.token(t).bytes);
  }
  auto worse = [&](TokenId a, TokenId b) {
    if (character[a] != character[b]) return static_cast<bool>(character[b]);
    if (scores.score[a] != scores.score[b]) return scores.score[a] < scores.score[b];
    const auto& ba = vocab.token(a).bytes;
    const auto& bb = vocab.token(b).bytes;
    if (ba.size() != bb.size()) return ba.size() < bb.size();
    return ba > bb;
  };
  std::sort(candidates.begin(), candidates.end(), worse);
  std::vector<bool> dropped(vocab.size(), false);
  for (size_t i = 0; i < remove && i < candidates.size(); ++i) {
    dropped[candidates[i]] = true;
  }

  std::vector<Token> kept;
  kept.reserve(next);
  double log_norm = kLogZero;
  for (size_t t = 0; t < vocab.size(); ++t) {
    if (dropped[t]) continue;
    Token token = vocab.token(static_cast<TokenId>(t));
    if (!token.is_protected) token.score = scores.score[t];
    log_norm = LogAdd(log_norm, token.log_prob);
    kept.push_back(std::move(token));
  }
  if (log_norm != kLogZero) {
    for (auto& token : kept) {
      if (token.log_prob != kLogZero) token.log_prob -= log_norm;
    }
  }
  return Vocabulary(std::move(kept));
}

namespace {

// Gives unseen tokens a small finite probability so that every byte stays
// encodable, then renormalizes.
void FloorAndNormalize(std::vector<Token>* tokens) {
  constexpr double kUnseenPenalty = 10.0;
  double min_finite = 0.0;
  bool any_finite = false;
  for (const auto& t : *tokens) {
    if (t.log_prob != kLogZero) {
      min_finite = any_finite ? std::min(min_finite, t.log_prob) : t.log_prob;
      any_finite = true;
    }
  }
  const double floor = any_finite ? min_finite - kUnseenPenalty : 0.0;
  double log_norm = kLogZero;
  for (auto& t : *tokens) {
    if (t.log_prob == kLogZero) t.log_prob = floor;
    log_norm = LogAdd(log_norm, t.log_prob);
  }
  for (auto& t : *tokens) t.log_prob -= log_norm;
}

}  // namespace

Model Train(const TrainerConfig& config, const SentenceTable& sentences) {
  config.Validate();
  if (sentences.total_count == 0) throw Error("empty corpus");
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();

  const ChunkTable chunks = BuildChunkTable(sentences, config.pretok);
  const SeedVocabulary seed = BuildSeed(
      chunks, {config.seed_mode, config.max_token_bytes, config.seed_cap});
  if (config.vocab_size > seed.size()) {
    throw ConfigError("vocab_size " + std::to_string(config.vocab_size) +
                      " exceeds the seed vocabulary size " +
                      std::to_string(seed.size()));
  }
  Vocabulary vocab = InitialVocabulary(seed);
  if (config.log) {
    *config.log << "seed: " << chunks.size() << " chunks, " << vocab.size()
                << " tokens\n";
  }

  for (int round = 1; vocab.size() > config.vocab_size; ++round) {
    const std::vector<double> ll =
        EmFit(&vocab, chunks, config.em_iters_per_round, config.threads);
    ScoreTable scores;
    if (config.scoring == ScoringMode::kBranchingEntropy) {
      const ChunkRows chunk_rows = ComputeChunkRows(
          vocab, chunks, config.containment, /*include_protected=*/false,
          config.threads);
      BranchingAccumulator acc(vocab.size());
      std::vector<std::pair<TokenId, double>> scratch;
      for (size_t s = 0; s < sentences.size(); ++s) {
        acc.Add(sentences.Prior(s),
                SentenceRow(chunks.membership[s], chunk_rows,
                            config.containment, &scratch));
      }
      scores = acc.Finish();
    } else {
      scores = LikelihoodScores(vocab, chunks, config.threads);
    }
    vocab = PruneRound(vocab, scores, config.shrink_factor, config.vocab_size,
                       config.keep_characters);
    if (config.log) {
      const double secs =
          std::chrono::duration<double>(Clock::now() - started).count();
      *config.log << "round " << round << " |V|=" << vocab.size()
                  << " loglik=" << ll.back() << " time=" << secs << "s\n";
    }
  }
  const std::vector<double> ll =
      EmFit(&vocab, chunks, config.final_em_iters, config.threads);
  if (config.log) {
    const double secs =
        std::chrono::duration<double>(Clock::now() - started).count();
    *config.log << "final |V|=" << vocab.size() << " loglik=" << ll.back()
                << " time=" << secs << "s\n";
  }

  std::vector<Token> tokens = vocab.tokens();
  FloorAndNormalize(&tokens);

  Model model;
  model.kind = ModelKind::kThunder;
  model.pretok = config.pretok;
  model.normalization = config.normalization;
  model.config = config.Echo();
  model.vocab = CanonicalizeIds(Vocabulary(std::move(tokens)));
  return model;
}

Model Train(const TrainerConfig& config, const std::vector<std::string>& paths) {
  config.Validate();
  return Train(config, LoadCorpus(paths, config.normalization));
}

}  // namespace thunder
