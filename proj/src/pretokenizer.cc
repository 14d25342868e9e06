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

#include "thunder/pretokenizer.h"

#include "thunder/errors.h"
#include "thunder/unicode.h"

namespace thunder {
namespace {

enum class CharClass : unsigned char { kLetter, kNumber, kSpace, kOther };

struct Scalar {
  size_t offset;
  char32_t cp;
  CharClass cls;
};

class Scanner {
 public:
  Scanner(std::string_view text, bool merge_words)
      : text_(text), merge_words_(merge_words) {
    size_t pos = 0;
    char32_t cp = 0;
    while (pos < text.size()) {
      size_t len = unicode::DecodeOne(text, pos, &cp);
      if (len == 0) {
        // Callers validate; treat a stray byte as an opaque symbol.
        len = 1;
        cp = 0xFFFD;
      }
      CharClass cls = CharClass::kOther;
      if (unicode::IsLetter(cp)) {
        cls = CharClass::kLetter;
      } else if (unicode::IsNumber(cp)) {
        cls = CharClass::kNumber;
      } else if (unicode::IsSpace(cp)) {
        cls = CharClass::kSpace;
      }
      scalars_.push_back({pos, cp, cls});
      pos += len;
    }
  }

  std::vector<Chunk> Run() {
    std::vector<Chunk> chunks;
    size_t i = 0;
    const size_t n = scalars_.size();
    while (i < n) {
      size_t end = 0;
      ChunkKind kind = ChunkKind::kSymbol;
      if (merge_words_ && (end = MatchWordGroup(i)) > i) {
        kind = ChunkKind::kLetters;
      } else if ((end = MatchContraction(i)) > i) {
        kind = ChunkKind::kSymbol;
      } else if (!merge_words_ && (end = MatchRun(i, CharClass::kLetter)) > i) {
        kind = ChunkKind::kLetters;
      } else if ((end = MatchRun(i, CharClass::kNumber)) > i) {
        kind = ChunkKind::kNumber;
      } else if ((end = MatchRun(i, CharClass::kOther)) > i) {
        kind = ChunkKind::kSymbol;
      } else {
        end = MatchSpaces(i);
        kind = ChunkKind::kWhitespace;
      }
      const size_t begin = scalars_[i].offset;
      const size_t stop = end < n ? scalars_[end].offset : text_.size();
      chunks.push_back({text_.substr(begin, stop - begin), kind, begin});
      i = end;
    }
    return chunks;
  }

 private:
  bool Is(size_t i, CharClass cls) const {
    return i < scalars_.size() && scalars_[i].cls == cls;
  }
  bool IsAsciiSpace(size_t i) const {
    return i < scalars_.size() && scalars_[i].cp == U' ';
  }

  // (?: ?\p{L}+)+[.?!]?
  size_t MatchWordGroup(size_t i) const {
    size_t j = i;
    for (;;) {
      size_t k = j;
      if (IsAsciiSpace(k)) ++k;
      if (!Is(k, CharClass::kLetter)) break;
      while (Is(k, CharClass::kLetter)) ++k;
      j = k;
    }
    if (j == i) return i;
    if (j < scalars_.size() && unicode::IsFinalMark(scalars_[j].cp)) ++j;
    return j;
  }

  // 's|'t|'re|'ve|'m|'ll|'d
  size_t MatchContraction(size_t i) const {
    if (i >= scalars_.size() || scalars_[i].cp != U'\'') return i;
    auto at = [&](size_t k) -> char32_t {
      return k < scalars_.size() ? scalars_[k].cp : 0;
    };
    const char32_t a = at(i + 1);
    if (a == U's' || a == U't' || a == U'm' || a == U'd') return i + 2;
    const char32_t b = at(i + 2);
    if ((a == U'r' && b == U'e') || (a == U'v' && b == U'e') ||
        (a == U'l' && b == U'l')) {
      return i + 3;
    }
    return i;
  }

  // " ?" followed by one or more scalars of `cls`.
  size_t MatchRun(size_t i, CharClass cls) const {
    size_t k = i;
    if (IsAsciiSpace(k) && Is(k + 1, cls)) ++k;
    if (!Is(k, cls)) return i;
    while (Is(k, cls)) ++k;
    return k;
  }

  // \s+(?!\S)|\s+
  size_t MatchSpaces(size_t i) const {
    size_t k = i;
    while (Is(k, CharClass::kSpace)) ++k;
    if (k == scalars_.size()) return k;
    // The run is followed by a non-space; give back its last scalar so that
    // the next word can take it as a leading space.
    if (k - i >= 2) return k - 1;
    return k;
  }

  std::string_view text_;
  bool merge_words_;
  std::vector<Scalar> scalars_;
};

}  // namespace

std::vector<Chunk> PretokenizeThunder(std::string_view text) {
  return Scanner(text, /*merge_words=*/true).Run();
}

std::vector<Chunk> PretokenizeGpt2(std::string_view text) {
  return Scanner(text, /*merge_words=*/false).Run();
}

std::vector<Chunk> Pretokenize(std::string_view text, PretokMode mode) {
  return mode == PretokMode::kThunder ? PretokenizeThunder(text)
                                      : PretokenizeGpt2(text);
}

std::string_view ToString(PretokMode mode) {
  return mode == PretokMode::kThunder ? "thunder" : "gpt2";
}

std::string_view ToString(ChunkKind kind) {
  switch (kind) {
    case ChunkKind::kLetters: return "letters";
    case ChunkKind::kNumber: return "number";
    case ChunkKind::kSymbol: return "symbol";
    case ChunkKind::kWhitespace: return "whitespace";
  }
  return "unknown";
}

PretokMode ParsePretokMode(std::string_view name) {
  if (name == "thunder") return PretokMode::kThunder;
  if (name == "gpt2") return PretokMode::kGpt2;
  throw ConfigError("unknown pre-tokenization mode: " + std::string(name));
}

}  // namespace thunder
