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

#ifndef THUNDER_METRICS_H_
#define THUNDER_METRICS_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "thunder/model.h"

namespace thunder {

struct FertilityCounts {
  std::string path;
  uint64_t tokens = 0;
  uint64_t words = 0;
  // tokens / words; NaN when the file has no words.
  double fertility() const;
};

struct FertilityReport {
  std::vector<FertilityCounts> files;
  FertilityCounts aggregate;  // summed counts, path "*"
};

// Maximal runs of non-whitespace scalars.
uint64_t CountWords(std::string_view text);

// Encodes every line and counts all emitted tokens, whitespace included.
// Throws Error when no file has a word.
FertilityReport Fertility(const Model& model, const std::vector<std::string>& paths,
                          int threads = 1);
FertilityCounts FertilityOfLines(const Model& model,
                                 const std::vector<std::string>& lines,
                                 int threads = 1);

nlohmann::ordered_json ToJson(const FertilityReport& report);
// Header plus one row per file and a final "*" row.
std::string ToTsv(const FertilityReport& report);

enum class VocabCategory { kMultiWord, kWordWithPunct, kSingleByte, kSingleChar, kPlain };
inline constexpr size_t kVocabCategoryCount = 5;

std::string_view ToString(VocabCategory category);

// Checked in order: single byte, single scalar, a space between two
// non-space parts, a final . ? ! right after a letter, anything else.
VocabCategory Categorize(std::string_view token);

struct VocabStats {
  std::array<uint64_t, kVocabCategoryCount> counts{};
  uint64_t total = 0;

  uint64_t count(VocabCategory c) const { return counts[static_cast<size_t>(c)]; }
  double share(VocabCategory c) const {
    return total == 0 ? 0.0 : static_cast<double>(count(c)) / static_cast<double>(total);
  }
};

VocabStats ComputeVocabStats(const Vocabulary& vocab);
nlohmann::ordered_json ToJson(const VocabStats& stats);

struct VocabOverlap {
  uint64_t shared = 0;
  uint64_t only_a = 0;
  uint64_t only_b = 0;
};

VocabOverlap ComputeOverlap(const Vocabulary& a, const Vocabulary& b);

}  // namespace thunder

#endif  // THUNDER_METRICS_H_
