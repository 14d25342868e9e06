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

#ifndef THUNDER_UNIT_FILTER_H_
#define THUNDER_UNIT_FILTER_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thunder/corpus.h"
#include "thunder/pretokenizer.h"

namespace thunder {

// Byte-level shape of a token, mirroring the linguistic hierarchy
// byte (phoneme) < character (syllable) < word fragment < phrase.
enum class ShapeClass {
  kByte,
  kCharacter,
  kWordFragment,
  kWordFragmentPunct,
  kPhrase,
  kPhrasePunct,
  kRejected,
};

struct UnitShape {
  ShapeClass cls = ShapeClass::kRejected;
  std::string detail;  // reason, set only when rejected

  bool accepted() const { return cls != ShapeClass::kRejected; }
};

std::string_view ToString(ShapeClass cls);

// Classifies a non-empty byte string by its intrinsic shape. A string is
// accepted only if it splits exactly into units of the level below it.
UnitShape ClassifyShape(std::string_view bytes);

enum class SeedMode { kLanguageAware, kAllNgrams };

std::string_view ToString(SeedMode mode);
SeedMode ParseSeedMode(std::string_view name);

// (candidate bytes, occurrences in one chunk). Views point into the chunk.
using CandidateCounts = std::vector<std::pair<std::string_view, uint32_t>>;

// Language-aware candidates of one chunk occurrence, at most
// `max_token_bytes` long:
//  (a) character-complete substrings of a single word;
//  (b) the space before a word followed by a character-complete prefix;
//  (c) runs of whole words, with the leading space when present;
//  (d) anything from (a)-(c) ending at the last word, extended by the
//      chunk's trailing '.', '?' or '!'.
// Whitespace chunks yield their individual characters. Candidates are sorted
// by bytes.
CandidateCounts GenerateCandidates(std::string_view chunk, ChunkKind kind,
                                   size_t max_token_bytes);

// Every byte substring up to `max_token_bytes`, sorted by bytes.
CandidateCounts GenerateNgrams(std::string_view chunk, size_t max_token_bytes);

struct SeedCandidate {
  std::string bytes;
  ShapeClass shape;
  uint64_t count;
};

struct SeedConfig {
  SeedMode mode = SeedMode::kLanguageAware;
  size_t max_token_bytes = 32;
  size_t cap = 1000000;
};

// Candidate pool for vocabulary construction. The 256 single-byte tokens are
// always part of the seed (implicitly, protected); `candidates` holds only
// multi-byte strings, ordered by (count desc, length desc, bytes asc).
struct SeedVocabulary {
  std::vector<SeedCandidate> candidates;
  std::array<uint64_t, 256> byte_counts{};
  SeedConfig config;

  size_t size() const { return candidates.size() + 256; }
};

// Throws Error("empty corpus") when the table has no chunks.
SeedVocabulary BuildSeed(const ChunkTable& chunks, const SeedConfig& config);

}  // namespace thunder

#endif  // THUNDER_UNIT_FILTER_H_
