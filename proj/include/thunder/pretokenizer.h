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

#ifndef THUNDER_PRETOKENIZER_H_
#define THUNDER_PRETOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace thunder {

enum class PretokMode { kThunder, kGpt2 };

enum class ChunkKind { kLetters, kNumber, kSymbol, kWhitespace };

// A pre-token: a non-empty span of the source text.
struct Chunk {
  std::string_view bytes;
  ChunkKind kind;
  size_t start;
};

// Korean-oriented splitting. Letter runs joined by single spaces form one
// chunk, optionally closed by a single '.', '?' or '!':
//   (?: ?\p{L}+)+[.?!]?
// Everything else falls back to the GPT-2 sub-patterns (contractions,
// numbers, other symbols, whitespace).
std::vector<Chunk> PretokenizeThunder(std::string_view text);

// GPT-2 pattern:
//   's|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+
std::vector<Chunk> PretokenizeGpt2(std::string_view text);

std::vector<Chunk> Pretokenize(std::string_view text, PretokMode mode);

// Input must be valid UTF-8; the chunks reference `text`.

std::string_view ToString(PretokMode mode);
std::string_view ToString(ChunkKind kind);
// Throws ConfigError on unknown names.
PretokMode ParsePretokMode(std::string_view name);

}  // namespace thunder

#endif  // THUNDER_PRETOKENIZER_H_
