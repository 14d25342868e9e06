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

#include "thunder/metrics.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "parallel.h"
#include "thunder/errors.h"
#include "thunder/unicode.h"

namespace thunder {

double FertilityCounts::fertility() const {
  if (words == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(tokens) / static_cast<double>(words);
}

uint64_t CountWords(std::string_view text) {
  uint64_t words = 0;
  bool in_word = false;
  for (size_t pos = 0; pos < text.size();) {
    char32_t cp = 0;
    size_t len = unicode::DecodeOne(text, pos, &cp);
    bool space = false;
    if (len == 0) {
      len = 1;  // malformed bytes count as word material
    } else {
      space = unicode::IsSpace(cp);
    }
    if (!space && !in_word) ++words;
    in_word = !space;
    pos += len;
  }
  return words;
}

namespace {

void CountLines(const Model& model, const std::vector<std::string>& lines,
                int threads, FertilityCounts* out) {
  constexpr size_t kBlock = 256;
  const size_t blocks = (lines.size() + kBlock - 1) / kBlock;
  std::vector<std::pair<uint64_t, uint64_t>> partial(blocks);
  internal::ParallelFor(blocks, threads, [&](size_t b) {
    const size_t end = std::min(lines.size(), (b + 1) * kBlock);
    for (size_t i = b * kBlock; i < end; ++i) {
      partial[b].first += Encode(model, lines[i]).size();
      partial[b].second += CountWords(lines[i]);
    }
  });
  for (const auto& [tokens, words] : partial) {
    out->tokens += tokens;
    out->words += words;
  }
}

}  // namespace

FertilityCounts FertilityOfLines(const Model& model,
                                 const std::vector<std::string>& lines,
                                 int threads) {
  FertilityCounts counts;
  counts.path = "*";
  CountLines(model, lines, threads, &counts);
  return counts;
}

FertilityReport Fertility(const Model& model, const std::vector<std::string>& paths,
                          int threads) {
  FertilityReport report;
  report.aggregate.path = "*";
  for (const auto& path : paths) {
    std::vector<std::string> lines;
    ForEachLine(path, [&](size_t line_number, std::string_view line) {
      if (const auto bad = unicode::FindInvalid(line)) {
        throw Utf8Error(path + ":" + std::to_string(line_number) +
                            ": invalid UTF-8 at byte offset " + std::to_string(*bad),
                        *bad);
      }
      lines.emplace_back(line);
    });
    FertilityCounts counts;
    counts.path = path;
    CountLines(model, lines, threads, &counts);
    report.aggregate.tokens += counts.tokens;
    report.aggregate.words += counts.words;
    report.files.push_back(std::move(counts));
  }
  if (report.aggregate.words == 0) throw Error("empty corpus: no words to measure");
  return report;
}

namespace {

nlohmann::ordered_json CountsJson(const FertilityCounts& c) {
  nlohmann::ordered_json j;
  j["path"] = c.path;
  j["tokens"] = c.tokens;
  j["words"] = c.words;
  const double f = c.fertility();
  if (std::isnan(f)) {
    j["fertility"] = nullptr;
  } else {
    j["fertility"] = f;
  }
  return j;
}

}  // namespace

nlohmann::ordered_json ToJson(const FertilityReport& report) {
  nlohmann::ordered_json j;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : report.files) j["files"].push_back(CountsJson(f));
  j["aggregate"] = CountsJson(report.aggregate);
  return j;
}

std::string ToTsv(const FertilityReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "path\ttokens\twords\tfertility\n";
  auto row = [&](const FertilityCounts& c) {
    out << c.path << '\t' << c.tokens << '\t' << c.words << '\t';
    const double f = c.fertility();
    if (std::isnan(f)) {
      out << "nan";
    } else {
      out << f;
    }
    out << '\n';
  };
  for (const auto& f : report.files) row(f);
  row(report.aggregate);
  return out.str();
}

std::string_view ToString(VocabCategory category) {
  switch (category) {
    case VocabCategory::kMultiWord: return "multi_word";
    case VocabCategory::kWordWithPunct: return "word_with_punct";
    case VocabCategory::kSingleByte: return "single_byte";
    case VocabCategory::kSingleChar: return "single_char";
    case VocabCategory::kPlain: return "plain";
  }
  return "plain";
}

VocabCategory Categorize(std::string_view token) {
  if (token.size() == 1) return VocabCategory::kSingleByte;
  if (!unicode::IsValid(token)) return VocabCategory::kPlain;
  std::vector<char32_t> cps;
  for (size_t pos = 0; pos < token.size();) {
    char32_t cp = 0;
    pos += unicode::DecodeOne(token, pos, &cp);
    cps.push_back(cp);
  }
  if (cps.size() == 1) return VocabCategory::kSingleChar;

  size_t begin = 0, end = cps.size();
  while (begin < end && cps[begin] == U' ') ++begin;
  while (end > begin && cps[end - 1] == U' ') --end;
  for (size_t i = begin; i < end; ++i) {
    if (cps[i] == U' ') return VocabCategory::kMultiWord;
  }
  if (unicode::IsFinalMark(cps.back()) && cps.size() >= 2 &&
      unicode::IsLetter(cps[cps.size() - 2])) {
    return VocabCategory::kWordWithPunct;
  }
  return VocabCategory::kPlain;
}

VocabStats ComputeVocabStats(const Vocabulary& vocab) {
  VocabStats stats;
  for (const Token& t : vocab.tokens()) {
    ++stats.counts[static_cast<size_t>(Categorize(t.bytes))];
    ++stats.total;
  }
  return stats;
}

nlohmann::ordered_json ToJson(const VocabStats& stats) {
  nlohmann::ordered_json j;
  j["total"] = stats.total;
  for (size_t i = 0; i < kVocabCategoryCount; ++i) {
    const auto c = static_cast<VocabCategory>(i);
    nlohmann::ordered_json entry;
    entry["count"] = stats.count(c);
    entry["percent"] = 100.0 * stats.share(c);
    j[std::string(ToString(c))] = entry;
  }
  return j;
}

VocabOverlap ComputeOverlap(const Vocabulary& a, const Vocabulary& b) {
  std::unordered_set<std::string_view> in_a;
  in_a.reserve(a.size());
  for (const Token& t : a.tokens()) in_a.insert(t.bytes);
  VocabOverlap overlap;
  for (const Token& t : b.tokens()) {
    if (in_a.count(t.bytes)) {
      ++overlap.shared;
    } else {
      ++overlap.only_b;
    }
  }
  overlap.only_a = a.size() - overlap.shared;
  return overlap;
}

}  // namespace thunder
