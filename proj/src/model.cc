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

#include "thunder/model.h"

#include <absl/strings/escaping.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "thunder/errors.h"
#include "thunder/lattice.h"
#include "thunder/unicode.h"

namespace thunder {

using json = nlohmann::ordered_json;

std::string_view ToString(ModelKind kind) {
  return kind == ModelKind::kThunder ? "thunder" : "bpe";
}

std::vector<TokenId> Encode(const Model& model, std::string_view text) {
  unicode::CheckValid(text, "input");
  std::string normalized;
  if (model.normalization == Normalization::kNfc) {
    normalized = unicode::NormalizeNfc(text);
    text = normalized;
  }
  std::vector<TokenId> ids;
  ids.reserve(text.size() / 2);
  for (const Chunk& chunk : Pretokenize(text, model.pretok)) {
    if (model.kind == ModelKind::kBpe) {
      const std::vector<TokenId> part = model.merges.Apply(chunk.bytes);
      ids.insert(ids.end(), part.begin(), part.end());
      continue;
    }
    const ViterbiResult best = Viterbi(BuildLattice(chunk.bytes, model.vocab));
    if (best.log_prob == kLogZero) {
      // Only reachable with zero-probability byte tokens.
      for (const char c : chunk.bytes) ids.push_back(static_cast<unsigned char>(c));
    } else {
      ids.insert(ids.end(), best.tokens.begin(), best.tokens.end());
    }
  }
  return ids;
}

std::string Decode(const Model& model, const std::vector<TokenId>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    const TokenId id = ids[i];
    if (id < 0 || static_cast<size_t>(id) >= model.vocab.size()) {
      throw Error("token id " + std::to_string(id) + " at position " +
                  std::to_string(i) + " is out of range (|V|=" +
                  std::to_string(model.vocab.size()) + ")");
    }
    out += model.vocab.token(id).bytes;
  }
  return out;
}

Vocabulary CanonicalizeIds(const Vocabulary& vocab) {
  std::vector<Token> tokens = vocab.tokens();
  const auto learned = tokens.begin() + std::min<size_t>(256, tokens.size());
  std::sort(learned, tokens.end(),
            [](const Token& a, const Token& b) { return a.bytes < b.bytes; });
  return Vocabulary(std::move(tokens));
}

namespace {

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Base64(std::string_view bytes) {
  return "\"" + absl::Base64Escape(absl::string_view(bytes.data(), bytes.size())) + "\"";
}

}  // namespace

std::string SerializeModel(const Model& model) {
  std::string out;
  out += "{\n";
  out += "  \"format_version\": " + std::to_string(Model::kFormatVersion) + ",\n";
  out += "  \"kind\": \"" + std::string(ToString(model.kind)) + "\",\n";
  out += "  \"pretok\": \"" + std::string(ToString(model.pretok)) + "\",\n";
  out += "  \"normalization\": \"" + std::string(ToString(model.normalization)) +
         "\",\n";
  out += "  \"config\": " + model.config.dump() + ",\n";
  out += "  \"tokens\": [";
  const auto& tokens = model.vocab.tokens();
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    out += i == 0 ? "\n" : ",\n";
    out += "    {\"id\": " + std::to_string(i);
    out += ", \"bytes\": " + Base64(t.bytes);
    out += ", \"text\": ";
    out += unicode::IsValid(t.bytes) ? json(t.bytes).dump() : "null";
    out += ", \"log_prob\": " + FormatDouble(t.log_prob);
    out += ", \"protected\": ";
    out += t.is_protected ? "true" : "false";
    out += ", \"score\": ";
    out += t.score ? FormatDouble(*t.score) : "null";
    out += "}";
  }
  out += "\n  ]";
  if (model.kind == ModelKind::kBpe) {
    out += ",\n  \"merges\": [";
    const auto& pairs = model.merges.pairs();
    for (size_t i = 0; i < pairs.size(); ++i) {
      out += i == 0 ? "\n" : ",\n";
      out += "    [" + Base64(pairs[i].first) + ", " + Base64(pairs[i].second) + "]";
    }
    out += "\n  ]";
  }
  out += "\n}\n";
  return out;
}

namespace {

using Code = ModelFormatError::Code;

[[noreturn]] void Fail(Code code, const std::string& what) {
  throw ModelFormatError(code, what);
}

const json& Field(const json& obj, const char* name, const std::string& where) {
  const auto it = obj.find(name);
  if (it == obj.end()) Fail(Code::kSchema, where + ": missing field \"" + name + "\"");
  return *it;
}

std::string String(const json& obj, const char* name, const std::string& where) {
  const json& v = Field(obj, name, where);
  if (!v.is_string()) Fail(Code::kSchema, where + ": \"" + name + "\" must be a string");
  return v.get<std::string>();
}

double Number(const json& v, const std::string& what, bool allow_pos_inf,
              bool allow_neg_inf) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (allow_pos_inf && s == "inf") return std::numeric_limits<double>::infinity();
    if (allow_neg_inf && s == "-inf") return kLogZero;
  }
  Fail(Code::kSchema, what + " must be a number");
}

std::string DecodeBase64(const json& v, const std::string& what) {
  std::string bytes;
  if (!v.is_string() || !absl::Base64Unescape(v.get<std::string>(), &bytes)) {
    Fail(Code::kSchema, what + " is not valid base64");
  }
  return bytes;
}

template <typename Fn>
auto AsSchema(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    Fail(Code::kSchema, where + ": " + e.what());
  }
}

}  // namespace

Model ParseModel(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    Fail(Code::kParse, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) Fail(Code::kSchema, "model file must be a JSON object");

  const json& version = Field(doc, "format_version", "model");
  if (!version.is_number_integer()) {
    Fail(Code::kSchema, "format_version must be an integer");
  }
  if (version.get<int64_t>() != Model::kFormatVersion) {
    Fail(Code::kUnsupportedVersion,
         "unsupported version " + std::to_string(version.get<int64_t>()) +
             " (expected " + std::to_string(Model::kFormatVersion) + ")");
  }

  Model model;
  const std::string kind = String(doc, "kind", "model");
  if (kind == "thunder") {
    model.kind = ModelKind::kThunder;
  } else if (kind == "bpe") {
    model.kind = ModelKind::kBpe;
  } else {
    Fail(Code::kSchema, "unknown model kind \"" + kind + "\"");
  }
  model.pretok = AsSchema("pretok", [&] {
    return ParsePretokMode(String(doc, "pretok", "model"));
  });
  model.normalization = AsSchema("normalization", [&] {
    return ParseNormalization(String(doc, "normalization", "model"));
  });
  model.config = Field(doc, "config", "model");
  if (!model.config.is_object()) Fail(Code::kSchema, "config must be an object");

  const json& list = Field(doc, "tokens", "model");
  if (!list.is_array()) Fail(Code::kSchema, "tokens must be an array");
  std::vector<Token> tokens;
  tokens.reserve(list.size());
  for (size_t i = 0; i < list.size(); ++i) {
    const json& entry = list[i];
    const std::string where = "tokens[" + std::to_string(i) + "]";
    if (!entry.is_object()) Fail(Code::kSchema, where + " must be an object");
    const json& id = Field(entry, "id", where);
    if (!id.is_number_integer()) Fail(Code::kSchema, where + ": id must be an integer");
    if (id.get<int64_t>() != static_cast<int64_t>(i)) {
      Fail(Code::kNonDenseIds, "non-dense ids: expected id " + std::to_string(i) +
                                   ", found " + std::to_string(id.get<int64_t>()));
    }
    Token t;
    t.bytes = DecodeBase64(Field(entry, "bytes", where), where + ".bytes");
    const json& display = Field(entry, "text", where);
    if (!(display.is_null() && !unicode::IsValid(t.bytes)) &&
        !(display.is_string() && display.get<std::string>() == t.bytes)) {
      Fail(Code::kSchema, where + ": text does not match bytes");
    }
    t.log_prob = Number(Field(entry, "log_prob", where), where + ".log_prob",
                        false, true);
    const json& prot = Field(entry, "protected", where);
    if (!prot.is_boolean()) Fail(Code::kSchema, where + ": protected must be a boolean");
    t.is_protected = prot.get<bool>();
    const json& score = Field(entry, "score", where);
    if (!score.is_null()) t.score = Number(score, where + ".score", true, false);
    tokens.push_back(std::move(t));
  }

  for (int b = 0; b < 256; ++b) {
    if (static_cast<size_t>(b) >= tokens.size() || tokens[b].bytes.size() != 1 ||
        static_cast<unsigned char>(tokens[b].bytes[0]) != b) {
      Fail(Code::kMissingByteToken,
           "missing byte token " + std::to_string(b) + " at id " + std::to_string(b));
    }
  }
  std::unordered_set<std::string_view> seen;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!seen.insert(tokens[i].bytes).second) {
      Fail(Code::kDuplicateToken,
           "duplicate token bytes at id " + std::to_string(i));
    }
  }
  model.vocab = AsSchema("tokens", [&] { return Vocabulary(std::move(tokens)); });

  const auto merges_it = doc.find("merges");
  if (model.kind == ModelKind::kBpe) {
    if (merges_it == doc.end() || !merges_it->is_array()) {
      Fail(Code::kSchema, "bpe model requires a merges array");
    }
    std::vector<BpeMerges::Pair> pairs;
    pairs.reserve(merges_it->size());
    for (size_t i = 0; i < merges_it->size(); ++i) {
      const json& m = (*merges_it)[i];
      const std::string where = "merges[" + std::to_string(i) + "]";
      if (!m.is_array() || m.size() != 2) {
        Fail(Code::kSchema, where + " must be a pair");
      }
      pairs.emplace_back(DecodeBase64(m[0], where), DecodeBase64(m[1], where));
    }
    model.merges = AsSchema("merges", [&] {
      return BpeMerges(std::move(pairs), model.vocab);
    });
  } else if (merges_it != doc.end()) {
    Fail(Code::kSchema, "thunder model must not carry merges");
  }
  return model;
}

void SaveModel(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::string text = SerializeModel(model);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out.flush()) throw IoError("failed writing " + path);
}

Model LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

}  // namespace thunder
