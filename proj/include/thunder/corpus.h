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

#ifndef THUNDER_CORPUS_H_
#define THUNDER_CORPUS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thunder/pretokenizer.h"

namespace thunder {

enum class Normalization { kNone, kNfc };

std::string_view ToString(Normalization normalization);
Normalization ParseNormalization(std::string_view name);

// Distinct corpus lines with occurrence counts. Ids are dense and follow
// first occurrence across the input files in path order.
struct SentenceTable {
  struct Entry {
    std::string text;
    uint64_t count = 0;
  };
  std::vector<Entry> entries;
  uint64_t total_count = 0;

  size_t size() const { return entries.size(); }
  // Frequency-weighted sentence prior.
  double Prior(size_t id) const {
    return static_cast<double>(entries[id].count) /
           static_cast<double>(total_count);
  }
};

// Distinct pre-tokens of a SentenceTable. A sentence's membership lists its
// chunks in text order; consecutive repeats of one chunk are folded into the
// multiplicity.
struct ChunkTable {
  struct Entry {
    std::string text;
    ChunkKind kind;
    uint64_t count = 0;
  };
  struct Occurrence {
    uint32_t chunk_id;
    uint32_t multiplicity;
  };
  std::vector<Entry> chunks;
  std::vector<std::vector<Occurrence>> membership;
  PretokMode mode = PretokMode::kThunder;

  size_t size() const { return chunks.size(); }
};

// Reads newline-separated UTF-8 files. "\n" and "\r\n" terminators are
// stripped and blank lines skipped. Throws IoError for unreadable files and
// Utf8Error (with file, line and offset in the message) for malformed text.
SentenceTable LoadCorpus(const std::vector<std::string>& paths,
                         Normalization normalization = Normalization::kNone);

// Same as LoadCorpus over in-memory lines.
SentenceTable MakeSentenceTable(const std::vector<std::string>& lines,
                                Normalization normalization =
                                    Normalization::kNone);

ChunkTable BuildChunkTable(const SentenceTable& sentences, PretokMode mode);

// Calls `fn(line_number, line)` for every line of a file, without
// terminators. Shared by corpus loading and evaluation.
void ForEachLine(const std::string& path,
                 const std::function<void(size_t, std::string_view)>& fn);

}  // namespace thunder

#endif  // THUNDER_CORPUS_H_
