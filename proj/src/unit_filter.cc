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

#include "thunder/unit_filter.h"

#include <algorithm>
#include <unordered_map>

#include "thunder/errors.h"
#include "thunder/unicode.h"

namespace thunder {

std::string_view ToString(ShapeClass cls) {
  switch (cls) {
    case ShapeClass::kByte: return "byte";
    case ShapeClass::kCharacter: return "character";
    case ShapeClass::kWordFragment: return "word_fragment";
    case ShapeClass::kWordFragmentPunct: return "word_fragment_punct";
    case ShapeClass::kPhrase: return "phrase";
    case ShapeClass::kPhrasePunct: return "phrase_punct";
    case ShapeClass::kRejected: return "rejected";
  }
  return "unknown";
}

std::string_view ToString(SeedMode mode) {
  return mode == SeedMode::kLanguageAware ? "language-aware" : "all-ngrams";
}

SeedMode ParseSeedMode(std::string_view name) {
  if (name == "language-aware" || name == "language_aware") {
    return SeedMode::kLanguageAware;
  }
  if (name == "all-ngrams" || name == "all_ngrams") return SeedMode::kAllNgrams;
  throw ConfigError("unknown seed mode: " + std::string(name));
}

namespace {

UnitShape Reject(std::string detail) {
  return {ShapeClass::kRejected, std::move(detail)};
}

}  // namespace

UnitShape ClassifyShape(std::string_view bytes) {
  if (bytes.empty()) return Reject("empty");
  if (bytes.size() == 1) return {ShapeClass::kByte, {}};

  std::vector<char32_t> cps;
  size_t pos = 0;
  while (pos < bytes.size()) {
    char32_t cp;
    const size_t len = unicode::DecodeOne(bytes, pos, &cp);
    if (len == 0) return Reject("partial character at byte " + std::to_string(pos));
    cps.push_back(cp);
    pos += len;
  }
  if (cps.size() == 1) return {ShapeClass::kCharacter, {}};

  size_t begin = cps.front() == U' ' ? 1 : 0;
  size_t end = cps.size();
  if (unicode::IsSpace(cps[begin])) {
    return Reject("space not followed by a character");
  }
  if (unicode::IsSpace(cps[end - 1])) return Reject("trailing space");

  const bool has_letter = std::any_of(cps.begin() + begin, cps.end(),
                                      [](char32_t c) { return unicode::IsLetter(c); });
  bool punct = false;
  if (has_letter && unicode::IsFinalMark(cps[end - 1])) {
    punct = true;
    --end;
    if (unicode::IsFinalMark(cps[end - 1])) {
      return Reject("more than one trailing mark");
    }
    if (unicode::IsSpace(cps[end - 1])) return Reject("space before mark");
  }

  bool phrase = false;
  for (size_t i = begin; i < end; ++i) {
    const char32_t c = cps[i];
    if (has_letter && unicode::IsFinalMark(c)) {
      return Reject("sentence mark inside a word");
    }
    if (!unicode::IsSpace(c)) continue;
    if (c != U' ') return Reject("non-space whitespace");
    if (cps[i + 1] == U' ') return Reject("adjacent spaces");
    phrase = true;
  }
  if (phrase) return {punct ? ShapeClass::kPhrasePunct : ShapeClass::kPhrase, {}};
  return {punct ? ShapeClass::kWordFragmentPunct : ShapeClass::kWordFragment, {}};
}

namespace {

// Folds a list of spans into sorted (bytes, count) pairs.
CandidateCounts Aggregate(std::string_view chunk,
                          std::vector<std::pair<size_t, size_t>>* spans) {
  std::vector<std::string_view> views;
  views.reserve(spans->size());
  for (const auto& [b, e] : *spans) views.push_back(chunk.substr(b, e - b));
  std::sort(views.begin(), views.end());
  CandidateCounts out;
  for (const auto& v : views) {
    if (!out.empty() && out.back().first == v) {
      ++out.back().second;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

struct Word {
  size_t begin;                 // byte offset of the first scalar
  size_t end;                   // byte offset past the last scalar
  bool spaced;                  // preceded by a single ' ' inside the chunk
  std::vector<size_t> bounds;   // scalar boundaries, begin..end inclusive
};

}  // namespace

CandidateCounts GenerateCandidates(std::string_view chunk, ChunkKind kind,
                                   size_t max_token_bytes) {
  std::vector<std::pair<size_t, size_t>> spans;
  auto emit = [&](size_t b, size_t e) {
    if (e > b && e - b <= max_token_bytes) spans.emplace_back(b, e);
  };

  std::vector<size_t> bounds;  // scalar boundaries of the whole chunk
  {
    size_t pos = 0;
    char32_t cp;
    while (pos < chunk.size()) {
      bounds.push_back(pos);
      size_t len = unicode::DecodeOne(chunk, pos, &cp);
      pos += len == 0 ? 1 : len;
    }
    bounds.push_back(chunk.size());
  }

  if (kind == ChunkKind::kWhitespace) {
    for (size_t i = 0; i + 1 < bounds.size(); ++i) emit(bounds[i], bounds[i + 1]);
    return Aggregate(chunk, &spans);
  }

  // Trailing sentence mark of a letter chunk.
  size_t body_end = chunk.size();
  bool mark = false;
  if (kind == ChunkKind::kLetters && bounds.size() >= 3 &&
      unicode::IsFinalMark(static_cast<unsigned char>(chunk.back()))) {
    mark = true;
    --body_end;
  }

  std::vector<Word> words;
  {
    Word current{0, 0, false, {}};
    bool in_word = false;
    for (size_t i = 0; i + 1 < bounds.size() && bounds[i] < body_end; ++i) {
      const size_t b = bounds[i];
      if (chunk[b] == ' ') {
        if (in_word) {
          current.end = b;
          current.bounds.push_back(b);
          words.push_back(std::move(current));
          current = Word{0, 0, false, {}};
          in_word = false;
        }
        continue;
      }
      if (!in_word) {
        current.begin = b;
        current.spaced = b > 0 && chunk[b - 1] == ' ';
        in_word = true;
      }
      current.bounds.push_back(b);
    }
    if (in_word) {
      current.end = body_end;
      current.bounds.push_back(body_end);
      words.push_back(std::move(current));
    }
  }
  if (words.empty()) return Aggregate(chunk, &spans);

  for (const Word& w : words) {
    const size_t nb = w.bounds.size();
    // (a) character-complete substrings inside the word.
    for (size_t i = 0; i + 1 < nb; ++i) {
      for (size_t j = i + 1; j < nb; ++j) {
        if (w.bounds[j] - w.bounds[i] > max_token_bytes) break;
        emit(w.bounds[i], w.bounds[j]);
      }
    }
    // (b) leading space + character-complete prefix.
    if (w.spaced) {
      for (size_t j = 1; j < nb; ++j) {
        if (w.bounds[j] - (w.begin - 1) > max_token_bytes) break;
        emit(w.begin - 1, w.bounds[j]);
      }
    }
  }
  // (c) runs of whole words.
  for (size_t a = 0; a < words.size(); ++a) {
    for (size_t b = a + 1; b < words.size(); ++b) {
      const size_t start = words[a].begin;
      if (words[b].end - start > max_token_bytes) break;
      emit(start, words[b].end);
      if (words[a].spaced) emit(start - 1, words[b].end);
    }
  }
  // (d) everything that ends at the last word, plus the mark.
  if (mark) {
    const size_t stop = chunk.size();
    const Word& last = words.back();
    for (size_t i = 0; i + 1 < last.bounds.size(); ++i) emit(last.bounds[i], stop);
    if (last.spaced) emit(last.begin - 1, stop);
    for (size_t a = 0; a + 1 < words.size(); ++a) {
      emit(words[a].begin, stop);
      if (words[a].spaced) emit(words[a].begin - 1, stop);
    }
  }
  return Aggregate(chunk, &spans);
}

CandidateCounts GenerateNgrams(std::string_view chunk, size_t max_token_bytes) {
  std::vector<std::pair<size_t, size_t>> spans;
  for (size_t i = 0; i < chunk.size(); ++i) {
    const size_t last = std::min(chunk.size(), i + max_token_bytes);
    for (size_t j = i + 1; j <= last; ++j) spans.emplace_back(i, j);
  }
  return Aggregate(chunk, &spans);
}

SeedVocabulary BuildSeed(const ChunkTable& chunks, const SeedConfig& config) {
  if (chunks.size() == 0) throw Error("empty corpus");
  if (config.cap < 1) throw ConfigError("seed cap must be at least 1");
  if (config.max_token_bytes < 1) {
    throw ConfigError("max_token_bytes must be at least 1");
  }

  SeedVocabulary seed;
  seed.config = config;
  std::unordered_map<std::string_view, uint64_t> counts;
  for (const auto& chunk : chunks.chunks) {
    for (const char c : chunk.text) {
      seed.byte_counts[static_cast<unsigned char>(c)] += chunk.count;
    }
    const CandidateCounts found =
        config.mode == SeedMode::kLanguageAware
            ? GenerateCandidates(chunk.text, chunk.kind, config.max_token_bytes)
            : GenerateNgrams(chunk.text, config.max_token_bytes);
    for (const auto& [bytes, n] : found) {
      if (bytes.size() < 2) continue;  // single bytes are always present
      counts[bytes] += static_cast<uint64_t>(n) * chunk.count;
    }
  }

  std::vector<std::pair<std::string_view, uint64_t>> ranked(counts.begin(),
                                                            counts.end());
  counts.clear();
  auto better = [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    if (x.first.size() != y.first.size()) return x.first.size() > y.first.size();
    return x.first < y.first;
  };
  if (ranked.size() > config.cap) {
    std::nth_element(ranked.begin(), ranked.begin() + config.cap, ranked.end(),
                     better);
    ranked.resize(config.cap);
  }
  std::sort(ranked.begin(), ranked.end(), better);

  seed.candidates.reserve(ranked.size());
  for (const auto& [bytes, count] : ranked) {
    seed.candidates.push_back(
        {std::string(bytes), ClassifyShape(bytes).cls, count});
  }
  return seed;
}

}  // namespace thunder
