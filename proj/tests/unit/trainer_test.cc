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

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.h"
#include "thunder/errors.h"
#include "thunder/lattice.h"
#include "thunder/model.h"
#include "thunder/trainer.h"
#include "thunder/unit_filter.h"

namespace thunder {
namespace {

Vocabulary MakeVocab(const std::vector<std::pair<std::string, double>>& extra) {
  std::vector<Token> tokens;
  for (int b = 0; b < 256; ++b) {
    tokens.push_back({std::string(1, static_cast<char>(b)), kLogZero, true, std::nullopt});
  }
  for (const auto& [bytes, p] : extra) {
    const double lp = p > 0 ? std::log(p) : kLogZero;
    if (bytes.size() == 1) {
      tokens[static_cast<unsigned char>(bytes[0])].log_prob = lp;
    } else {
      tokens.push_back({bytes, lp, false, std::nullopt});
    }
  }
  return Vocabulary(std::move(tokens));
}

double Prob(const Vocabulary& v, std::string_view bytes) {
  return std::exp(v.token(*v.Find(bytes)).log_prob);
}

std::vector<std::string> RandomCorpus(uint64_t seed, int lines, size_t max_scalars) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  for (int i = 0; i < lines; ++i) out.push_back(testing::RandomMixedText(rng, max_scalars));
  return out;
}

TEST_SUITE("vocabulary") {

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(Vocabulary(std::vector<Token>(10)), Error);
  std::vector<Token> tokens = Vocabulary::ByteLevel().tokens();
  tokens.push_back({"ab", 0.0, false, std::nullopt});
  tokens.push_back({"ab", 0.0, false, std::nullopt});
  CHECK_THROWS_AS(Vocabulary{tokens}, Error);
  tokens.pop_back();
  std::swap(tokens[3], tokens[4]);
  CHECK_THROWS_AS(Vocabulary{tokens}, Error);
}

TEST_CASE("prefix search") {
  const Vocabulary v = MakeVocab({{"ab", 0.1}, {"abc", 0.1}, {"b", 0.1}});
  std::vector<size_t> lengths;
  v.index().CommonPrefixSearch("abcd", 0, [&](size_t len, TokenId) { lengths.push_back(len); });
  CHECK(lengths == std::vector<size_t>{1, 2, 3});
  CHECK(v.Find("abc").has_value());
  CHECK_FALSE(v.Find("abd").has_value());
  CHECK(v.max_token_bytes() == 3);
}

}  // TEST_SUITE

TEST_SUITE("trainer") {

TEST_CASE("one EM step on the two-token example") {
  Vocabulary v = MakeVocab({{"a", 1.0 / 3}, {"b", 1.0 / 3}, {"ab", 1.0 / 3}});
  const ChunkTable chunks = BuildChunkTable(MakeSentenceTable({"ab"}), PretokMode::kGpt2);
  const auto ll = EmFit(&v, chunks, 2);
  REQUIRE(ll.size() == 2);
  CHECK(ll[0] == doctest::Approx(std::log(4.0 / 9.0)).epsilon(1e-12));
  CHECK(ll[1] == doctest::Approx(std::log(0.64)).epsilon(1e-12));
  CHECK(ll[0] == doctest::Approx(-0.810930).epsilon(1e-6));
  CHECK(ll[1] == doctest::Approx(-0.446287).epsilon(1e-6));
}

TEST_CASE("EM probabilities after one iteration") {
  Vocabulary v = MakeVocab({{"a", 1.0 / 3}, {"b", 1.0 / 3}, {"ab", 1.0 / 3}});
  const ChunkTable chunks = BuildChunkTable(MakeSentenceTable({"ab"}), PretokMode::kGpt2);
  EmFit(&v, chunks, 1);
  CHECK(Prob(v, "ab") == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(Prob(v, "a") == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(Prob(v, "b") == doctest::Approx(0.2).epsilon(1e-12));
  // Unused bytes sit at the floor instead of zero.
  CHECK(v.token('z').log_prob == kProtectedLogFloor);
  CHECK_THROWS_AS(EmFit(&v, chunks, 0), ConfigError);
}

TEST_CASE("byte-only EM reaches unigram frequencies in one step and stays there") {
  Vocabulary v = Vocabulary::ByteLevel();
  const ChunkTable chunks =
      BuildChunkTable(MakeSentenceTable({"aab", "ba"}), PretokMode::kGpt2);
  EmFit(&v, chunks, 1);
  CHECK(Prob(v, "a") == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(Prob(v, "b") == doctest::Approx(0.4).epsilon(1e-12));
  const double before = v.token('a').log_prob;
  EmFit(&v, chunks, 1);
  CHECK(std::abs(v.token('a').log_prob - before) <= 1e-12);
}

TEST_CASE("EM log-likelihood never decreases") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const SentenceTable sentences = MakeSentenceTable(RandomCorpus(seed, 60, 24));
    const ChunkTable chunks = BuildChunkTable(sentences, PretokMode::kThunder);
    const SeedVocabulary seedv = BuildSeed(chunks, {});
    Vocabulary v = InitialVocabulary(seedv);
    const auto ll = EmFit(&v, chunks, 8);
    for (size_t i = 1; i < ll.size(); ++i) CHECK(ll[i] >= ll[i - 1] - 1e-9);
    double mass = 0.0;
    for (const auto& t : v.tokens()) mass += std::exp(t.log_prob);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("containment of a repeated chunk") {
  const Vocabulary v = MakeVocab({{"a", 0.3}, {"b", 0.3}, {"ab", 0.4}});
  const SentenceTable one = MakeSentenceTable({"ab"});
  const auto rows1 = ContainmentMarginals(v, one, BuildChunkTable(one, PretokMode::kGpt2),
                                          ContainmentMode::kExact);
  REQUIRE(rows1.size() == 1);
  double pa = 0.0;
  for (const auto& [t, p] : rows1[0]) {
    if (t == 'a') pa = p;
  }
  CHECK(pa == doctest::Approx(0.183673).epsilon(1e-6));

  // "ab" twice in one line; the separating "." has no mass and adds nothing.
  const SentenceTable two = MakeSentenceTable({"ab.ab"});
  const auto rows2 = ContainmentMarginals(v, two, BuildChunkTable(two, PretokMode::kGpt2),
                                          ContainmentMode::kExact);
  for (const auto& [t, p] : rows2[0]) {
    if (t == 'a') pa = p;
  }
  CHECK(1.0 - pa == doctest::Approx(0.666389).epsilon(1e-6));
  CHECK(pa == doctest::Approx(0.333611).epsilon(1e-6));
}

TEST_CASE("branching entropy examples") {
  BranchingAccumulator even(1);
  even.Add(0.5, {{0, 0.2}});
  even.Add(0.5, {{0, 0.2}});
  const ScoreTable a = even.Finish();
  CHECK(a.marginal[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(a.entropy[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(a.score[0] == doctest::Approx(0.138629).epsilon(1e-6));

  BranchingAccumulator skew(1);
  skew.Add(0.5, {{0, 0.3}});
  skew.Add(0.5, {{0, 0.1}});
  const ScoreTable b = skew.Finish();
  CHECK(b.marginal[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(b.entropy[0] == doctest::Approx(0.562335).epsilon(1e-6));
  CHECK(b.score[0] == doctest::Approx(0.112467).epsilon(1e-6));

  BranchingAccumulator single(1);
  single.Add(0.5, {{0, 0.7}});
  single.Add(0.5, {});
  const ScoreTable c = single.Finish();
  CHECK(c.entropy[0] == 0.0);
  CHECK(c.score[0] == 0.0);
}

TEST_CASE("branching score properties on random corpora") {
  for (uint64_t seed = 10; seed < 14; ++seed) {
    const SentenceTable sentences = MakeSentenceTable(RandomCorpus(seed, 40, 16));
    const ChunkTable chunks = BuildChunkTable(sentences, PretokMode::kThunder);
    Vocabulary v = InitialVocabulary(BuildSeed(chunks, {}));
    EmFit(&v, chunks, 2);
    const auto rows = ContainmentMarginals(v, sentences, chunks, ContainmentMode::kExact);
    const ScoreTable s = BranchingScores(rows, sentences, v.size());
    std::vector<double> posterior_sum(v.size(), 0.0);
    std::vector<size_t> support(v.size(), 0);
    for (size_t y = 0; y < rows.size(); ++y) {
      for (const auto& [t, p] : rows[y]) {
        posterior_sum[t] += sentences.Prior(y) * p / s.marginal[t];
        ++support[t];
      }
    }
    for (size_t t = 0; t < v.size(); ++t) {
      if (s.marginal[t] <= 0.0) continue;
      CHECK(posterior_sum[t] == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(s.entropy[t] >= 0.0);
      CHECK(s.entropy[t] <= std::log(static_cast<double>(support[t])) + 1e-9);
      CHECK(s.score[t] == s.entropy[t] * s.marginal[t]);
    }
  }
}

TEST_CASE("likelihood loss examples") {
  const Vocabulary v = MakeVocab({{"a", 0.2}, {"b", 0.2}, {"ab", 0.6}, {"cd", 0.5}});
  const ChunkTable chunks = BuildChunkTable(MakeSentenceTable({"ab"}), PretokMode::kGpt2);
  const ScoreTable s = LikelihoodScores(v, chunks);
  CHECK(s.score[*v.Find("ab")] == doctest::Approx(2.772589).epsilon(1e-6));
  CHECK(s.score[*v.Find("cd")] == 0.0);

  const Vocabulary no_fallback = MakeVocab({{"aa", 1.0}});
  const ChunkTable aa = BuildChunkTable(MakeSentenceTable({"aa"}), PretokMode::kGpt2);
  CHECK(std::isinf(LikelihoodScores(no_fallback, aa).score[*no_fallback.Find("aa")]));
  const Vocabulary fallback = MakeVocab({{"aa", 0.9}, {"a", 0.1}});
  CHECK(std::isfinite(LikelihoodScores(fallback, aa).score[*fallback.Find("aa")]));
}

TEST_CASE("pruning sizes and order") {
  CHECK(NextVocabSize(1000, 0.75, 500) == 750);
  CHECK(NextVocabSize(600, 0.75, 500) == 500);
  CHECK(NextVocabSize(300, 0.5, 257) == 257);
  CHECK_THROWS_AS(NextVocabSize(300, 0.5, 256), ConfigError);

  const Vocabulary v = MakeVocab({{"a", 0.4}, {"pq", 0.2}, {"rst", 0.2}, {"uv", 0.2}});
  ScoreTable scores(v.size());
  scores.score[*v.Find("pq")] = 0.1;
  scores.score[*v.Find("rst")] = 0.1;
  scores.score[*v.Find("uv")] = 0.5;
  const Vocabulary pruned = PruneRound(v, scores, 0.75, 258);
  CHECK(pruned.size() == 258);
  CHECK_FALSE(pruned.Find("pq").has_value());
  CHECK(pruned.Find("rst").has_value());
  CHECK(pruned.token(*pruned.Find("uv")).score == 0.5);
  CHECK(Prob(pruned, "uv") == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(Prob(pruned, "a") == doctest::Approx(0.5).epsilon(1e-12));

  // Equal score and length: the larger bytes go first.
  const Vocabulary w = MakeVocab({{"a", 0.5}, {"pq", 0.25}, {"pr", 0.25}});
  ScoreTable flat(w.size());
  const Vocabulary kept = PruneRound(w, flat, 0.5, 257);
  CHECK(kept.Find("pq").has_value());
  CHECK_FALSE(kept.Find("pr").has_value());
  CHECK_THROWS_AS(PruneRound(kept, ScoreTable(kept.size()), 0.5, 257), ConfigError);
}

TEST_CASE("single characters can be pruned last") {
  const Vocabulary v = MakeVocab({{"a", 0.4}, {"가", 0.3}, {"pq", 0.3}});
  ScoreTable scores(v.size());
  scores.score[*v.Find("pq")] = 1.0;
  const Vocabulary plain = PruneRound(v, scores, 0.5, 257);
  CHECK_FALSE(plain.Find("가").has_value());
  const Vocabulary kept = PruneRound(v, scores, 0.5, 257, /*keep_characters=*/true);
  CHECK(kept.Find("가").has_value());
  CHECK_FALSE(kept.Find("pq").has_value());
  CHECK(IsSingleCharacter("가"));
  CHECK_FALSE(IsSingleCharacter("a"));
  CHECK_FALSE(IsSingleCharacter("가나"));
  CHECK_FALSE(IsSingleCharacter("\xEA\xB0"));
}

TEST_CASE("training a one-line corpus") {
  TrainerConfig config;
  config.vocab_size = 257;
  config.threads = 1;
  const Model m = Train(config, MakeSentenceTable({"ab"}));
  CHECK(m.vocab.size() == 257);
  CHECK(m.vocab.Find("ab").has_value());
  config.vocab_size = 259;
  CHECK_THROWS_AS(Train(config, MakeSentenceTable({"ab"})), ConfigError);
  CHECK_THROWS_AS(Train(config, MakeSentenceTable({})), Error);
}

TEST_CASE("tokens seen in one sentence only go first under branching entropy") {
  TrainerConfig config;
  config.pretok = PretokMode::kGpt2;
  config.vocab_size = 257;
  config.threads = 1;
  const SentenceTable s = MakeSentenceTable({"ab cd", "ab ef"});
  const Model m = Train(config, s);
  REQUIRE(m.vocab.size() == 257);
  CHECK(m.vocab.token(256).bytes == "ab");

  config.scoring = ScoringMode::kLikelihood;
  CHECK(Train(config, s).vocab.size() == 257);
}

TEST_CASE("trained vocabularies keep their invariants") {
  const SentenceTable sentences = MakeSentenceTable(RandomCorpus(99, 300, 30));
  for (const ScoringMode scoring : {ScoringMode::kBranchingEntropy, ScoringMode::kLikelihood}) {
    TrainerConfig config;
    config.vocab_size = 400;
    config.scoring = scoring;
    config.threads = 1;
    std::ostringstream log;
    config.log = &log;
    const Model m = Train(config, sentences);
    CHECK(m.vocab.size() == 400);
    double mass = 0.0;
    for (size_t id = 0; id < m.vocab.size(); ++id) {
      const Token& t = m.vocab.token(static_cast<TokenId>(id));
      mass += std::exp(t.log_prob);
      CHECK(std::isfinite(t.log_prob));
      CHECK(t.is_protected == (id < 256));
      if (id >= 256) {
        CHECK(ClassifyShape(t.bytes).accepted());
        if (id > 256) CHECK(m.vocab.token(static_cast<TokenId>(id - 1)).bytes < t.bytes);
      }
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(log.str().find("round 1 |V|=") != std::string::npos);
  }
}

TEST_CASE("thread count does not change the model") {
  const SentenceTable sentences = MakeSentenceTable(RandomCorpus(7, 400, 30));
  TrainerConfig config;
  config.vocab_size = 300;
  config.threads = 1;
  const std::string one = SerializeModel(Train(config, sentences));
  config.threads = 4;
  CHECK(SerializeModel(Train(config, sentences)) == one);
  config.containment = ContainmentMode::kApprox;
  config.threads = 1;
  const std::string approx1 = SerializeModel(Train(config, sentences));
  config.threads = 3;
  CHECK(SerializeModel(Train(config, sentences)) == approx1);
}

TEST_CASE("config validation") {
  TrainerConfig config;
  config.vocab_size = 256;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  config.vocab_size = 300;
  config.shrink_factor = 1.0;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  config.shrink_factor = 0.5;
  config.em_iters_per_round = 0;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
  CHECK(ParseScoringMode("likelihood") == ScoringMode::kLikelihood);
  CHECK(ParseContainmentMode("approx") == ContainmentMode::kApprox);
  CHECK_THROWS_AS(ParseScoringMode("ml"), ConfigError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace thunder
