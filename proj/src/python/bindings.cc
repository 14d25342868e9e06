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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "thunder/bpe.h"
#include "thunder/errors.h"
#include "thunder/metrics.h"
#include "thunder/model.h"
#include "thunder/pretokenizer.h"
#include "thunder/trainer.h"
#include "thunder/unit_filter.h"

namespace py = pybind11;
using namespace thunder;

namespace {

py::object ToPython(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

std::vector<std::string> AsPaths(const py::object& corpus) {
  if (py::isinstance<py::str>(corpus)) return {corpus.cast<std::string>()};
  std::vector<std::string> paths;
  for (const auto& p : corpus) paths.push_back(py::str(p).cast<std::string>());
  return paths;
}

Model TrainUnigram(const py::object& corpus, size_t vocab_size,
                   const std::string& pretok, const std::string& seed,
                   const std::string& scoring, size_t max_token_bytes,
                   size_t seed_cap, double shrink, int em_iters,
                   int final_em_iters, const std::string& containment,
                   bool keep_characters, const std::string& normalization,
                   int threads) {
  TrainerConfig config;
  config.vocab_size = vocab_size;
  config.pretok = ParsePretokMode(pretok);
  config.seed_mode = ParseSeedMode(seed);
  config.scoring = ParseScoringMode(scoring);
  config.max_token_bytes = max_token_bytes;
  config.seed_cap = seed_cap;
  config.shrink_factor = shrink;
  config.em_iters_per_round = em_iters;
  config.final_em_iters = final_em_iters;
  config.containment = ParseContainmentMode(containment);
  config.keep_characters = keep_characters;
  config.normalization = ParseNormalization(normalization);
  config.threads = threads;
  const std::vector<std::string> paths = AsPaths(corpus);
  py::gil_scoped_release release;
  return Train(config, paths);
}

Model TrainBpe(const py::object& corpus, size_t vocab_size, const std::string& pretok,
               uint64_t min_frequency, const std::string& normalization) {
  BpeConfig config;
  config.vocab_size = vocab_size;
  config.pretok = ParsePretokMode(pretok);
  config.min_frequency = min_frequency;
  config.normalization = ParseNormalization(normalization);
  const std::vector<std::string> paths = AsPaths(corpus);
  py::gil_scoped_release release;
  return BpeTrain(config, LoadCorpus(paths, config.normalization));
}

py::dict TokenInfo(const Model& model, TokenId id) {
  if (id < 0 || static_cast<size_t>(id) >= model.vocab.size()) {
    throw py::index_error("token id out of range");
  }
  const Token& t = model.vocab.token(id);
  py::dict d;
  d["id"] = id;
  d["bytes"] = py::bytes(t.bytes);
  d["log_prob"] = t.log_prob;
  d["protected"] = t.is_protected;
  d["score"] = t.score ? py::object(py::float_(*t.score)) : py::object(py::none());
  d["category"] = std::string(ToString(Categorize(t.bytes)));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Korean-aware unigram tokenizer with a byte-level BPE baseline";

  auto base = py::register_exception<Error>(m, "ThunderError", PyExc_RuntimeError);
  py::register_exception<ModelFormatError>(m, "ModelFormatError", base.ptr());
  py::register_exception<Utf8Error>(m, "Utf8Error", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<Model>(m, "Model")
      .def_static("load", &LoadModel, py::arg("path"))
      .def_static("from_json", [](const std::string& text) { return ParseModel(text); },
                  py::arg("text"))
      .def("save", [](const Model& self, const std::string& path) { SaveModel(self, path); },
           py::arg("path"))
      .def("to_json", &SerializeModel)
      .def_property_readonly("kind", [](const Model& self) {
        return std::string(ToString(self.kind));
      })
      .def_property_readonly("pretok", [](const Model& self) {
        return std::string(ToString(self.pretok));
      })
      .def_property_readonly("config", [](const Model& self) { return ToPython(self.config); })
      .def("__len__", [](const Model& self) { return self.vocab.size(); })
      .def("encode", [](const Model& self, const std::string& text) {
        return Encode(self, text);
      }, py::arg("text"))
      .def("pieces", [](const Model& self, const std::string& text) {
        py::list out;
        for (TokenId id : Encode(self, text)) out.append(py::bytes(self.vocab.token(id).bytes));
        return out;
      }, py::arg("text"))
      .def("decode_bytes", [](const Model& self, const std::vector<TokenId>& ids) {
        return py::bytes(Decode(self, ids));
      }, py::arg("ids"))
      .def("decode", [](const Model& self, const std::vector<TokenId>& ids) {
        const std::string bytes = Decode(self, ids);
        return py::reinterpret_steal<py::str>(
            PyUnicode_DecodeUTF8(bytes.data(), static_cast<Py_ssize_t>(bytes.size()),
                                 "replace"));
      }, py::arg("ids"))
      .def("token", &TokenInfo, py::arg("id"))
      .def("token_id", [](const Model& self, const py::bytes& bytes) {
        const auto id = self.vocab.Find(std::string(bytes));
        return id ? py::object(py::int_(*id)) : py::object(py::none());
      }, py::arg("bytes"))
      .def("vocab_stats", [](const Model& self) {
        return ToPython(ToJson(ComputeVocabStats(self.vocab)));
      });

  m.def("train", &TrainUnigram, py::arg("corpus"), py::arg("vocab_size"),
        py::arg("pretok") = "thunder", py::arg("seed") = "language-aware",
        py::arg("scoring") = "branching-entropy", py::arg("max_token_bytes") = 32,
        py::arg("seed_cap") = 1000000, py::arg("shrink") = 0.75, py::arg("em_iters") = 2,
        py::arg("final_em_iters") = 2, py::arg("containment") = "exact",
        py::arg("keep_characters") = true, py::arg("normalization") = "none", py::arg("threads") = 0);
  m.def("train_bpe", &TrainBpe, py::arg("corpus"), py::arg("vocab_size"),
        py::arg("pretok") = "gpt2", py::arg("min_frequency") = 2,
        py::arg("normalization") = "none");

  m.def("pretokenize", [](const std::string& text, const std::string& mode) {
    std::vector<std::string> out;
    for (const Chunk& c : Pretokenize(text, ParsePretokMode(mode))) out.emplace_back(c.bytes);
    return out;
  }, py::arg("text"), py::arg("mode") = "thunder");
  m.def("classify_shape", [](const py::bytes& bytes) {
    return std::string(ToString(ClassifyShape(std::string(bytes)).cls));
  }, py::arg("bytes"));
  m.def("count_words", [](const std::string& text) { return CountWords(text); },
        py::arg("text"));
  m.def("fertility", [](const Model& model, const std::vector<std::string>& lines,
                        int threads) {
    FertilityCounts counts;
    {
      py::gil_scoped_release release;
      counts = FertilityOfLines(model, lines, threads);
    }
    py::dict d;
    d["tokens"] = counts.tokens;
    d["words"] = counts.words;
    d["fertility"] = counts.fertility();
    return d;
  }, py::arg("model"), py::arg("lines"), py::arg("threads") = 1);
  m.def("overlap", [](const Model& a, const Model& b) {
    const VocabOverlap o = ComputeOverlap(a.vocab, b.vocab);
    py::dict d;
    d["shared"] = o.shared;
    d["only_a"] = o.only_a;
    d["only_b"] = o.only_b;
    return d;
  }, py::arg("a"), py::arg("b"));

#ifdef VERSION_INFO
#define THUNDER_STR(x) #x
#define THUNDER_XSTR(x) THUNDER_STR(x)
  m.attr("__version__") = THUNDER_XSTR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
