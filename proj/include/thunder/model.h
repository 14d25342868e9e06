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

#ifndef THUNDER_MODEL_H_
#define THUNDER_MODEL_H_

#include <json.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thunder/bpe.h"
#include "thunder/corpus.h"
#include "thunder/pretokenizer.h"
#include "thunder/vocabulary.h"

namespace thunder {

enum class ModelKind { kThunder, kBpe };

std::string_view ToString(ModelKind kind);

// A trained tokenizer. Unigram models segment each pre-token by Viterbi over
// the vocabulary; BPE models replay `merges` in order.
struct Model {
  static constexpr int kFormatVersion = 1;

  ModelKind kind = ModelKind::kThunder;
  PretokMode pretok = PretokMode::kThunder;
  Normalization normalization = Normalization::kNone;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  Vocabulary vocab;
  BpeMerges merges;  // BPE models only
};

// Token ids for `text`. Throws Utf8Error on malformed input.
std::vector<TokenId> Encode(const Model& model, std::string_view text);

// Concatenated token bytes. Throws Error naming the position of an
// out-of-range id.
std::string Decode(const Model& model, const std::vector<TokenId>& ids);

// JSON document, one token per line. Equal models serialize to identical
// bytes.
std::string SerializeModel(const Model& model);
// Throws ModelFormatError.
Model ParseModel(std::string_view text);

void SaveModel(const Model& model, const std::string& path);
Model LoadModel(const std::string& path);

// Reassigns ids: bytes keep 0..255, the rest follow ascending byte order.
Vocabulary CanonicalizeIds(const Vocabulary& vocab);

}  // namespace thunder

#endif  // THUNDER_MODEL_H_
