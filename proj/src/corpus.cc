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

#include "thunder/corpus.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "thunder/errors.h"
#include "thunder/unicode.h"

namespace thunder {

std::string_view ToString(Normalization normalization) {
  return normalization == Normalization::kNfc ? "nfc" : "none";
}

Normalization ParseNormalization(std::string_view name) {
  if (name == "none") return Normalization::kNone;
  if (name == "nfc") return Normalization::kNfc;
  throw ConfigError("unknown normalization: " + std::string(name));
}

void ForEachLine(const std::string& path,
                 const std::function<void(size_t, std::string_view)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  const std::string data = buffer.str();

  size_t line_number = 0;
  size_t pos = 0;
  while (pos < data.size()) {
    size_t end = data.find('\n', pos);
    const size_t next = end == std::string::npos ? data.size() : end + 1;
    if (end == std::string::npos) end = data.size();
    std::string_view line(data.data() + pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_number, line);
    pos = next;
  }
}

namespace {

class SentenceBuilder {
 public:
  explicit SentenceBuilder(Normalization normalization)
      : normalization_(normalization) {}

  void Add(std::string_view line) {
    if (line.empty()) return;
    std::string text = normalization_ == Normalization::kNfc
                           ? unicode::NormalizeNfc(line)
                           : std::string(line);
    auto [it, inserted] = index_.try_emplace(text, table_.entries.size());
    if (inserted) table_.entries.push_back({std::move(text), 0});
    ++table_.entries[it->second].count;
    ++table_.total_count;
  }

  SentenceTable Finish() { return std::move(table_); }

 private:
  Normalization normalization_;
  SentenceTable table_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace

SentenceTable LoadCorpus(const std::vector<std::string>& paths,
                         Normalization normalization) {
  SentenceBuilder builder(normalization);
  for (const auto& path : paths) {
    ForEachLine(path, [&](size_t line_number, std::string_view line) {
      if (const auto bad = unicode::FindInvalid(line)) {
        throw Utf8Error(path + ":" + std::to_string(line_number) +
                            ": invalid UTF-8 at byte offset " +
                            std::to_string(*bad),
                        *bad);
      }
      builder.Add(line);
    });
  }
  return builder.Finish();
}

SentenceTable MakeSentenceTable(const std::vector<std::string>& lines,
                                Normalization normalization) {
  SentenceBuilder builder(normalization);
  for (size_t i = 0; i < lines.size(); ++i) {
    unicode::CheckValid(lines[i], "line " + std::to_string(i + 1));
    builder.Add(lines[i]);
  }
  return builder.Finish();
}

ChunkTable BuildChunkTable(const SentenceTable& sentences, PretokMode mode) {
  ChunkTable table;
  table.mode = mode;
  table.membership.resize(sentences.size());
  std::unordered_map<std::string, uint32_t> index;

  for (size_t sid = 0; sid < sentences.size(); ++sid) {
    const auto& sentence = sentences.entries[sid];
    auto& members = table.membership[sid];
    for (const Chunk& chunk : Pretokenize(sentence.text, mode)) {
      auto [it, inserted] = index.try_emplace(
          std::string(chunk.bytes), static_cast<uint32_t>(table.chunks.size()));
      const uint32_t id = it->second;
      if (inserted) {
        table.chunks.push_back({std::string(chunk.bytes), chunk.kind, 0});
      }
      table.chunks[id].count += sentence.count;
      if (!members.empty() && members.back().chunk_id == id) {
        ++members.back().multiplicity;
      } else {
        members.push_back({id, 1});
      }
    }
  }
  return table;
}

}  // namespace thunder
