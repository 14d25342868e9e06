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

#include "thunder/cli.h"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "thunder/bpe.h"
#include "thunder/errors.h"
#include "thunder/metrics.h"
#include "thunder/model.h"
#include "thunder/trainer.h"
#include "thunder/unicode.h"
#include "thunder/unit_filter.h"

namespace thunder {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

int DefaultThreads() {
  const char* env = std::getenv("THUNDER_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  int value = 0;
  const std::string_view s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || value < 0) {
    throw UsageError("THUNDER_THREADS must be a non-negative integer, got \"" +
                     std::string(s) + "\"");
  }
  return value;
}

template <typename Fn>
auto ParseFlag(const std::string& flag, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

bool ReadLine(std::istream& in, std::string* line) {
  if (!std::getline(in, *line)) return false;
  if (!line->empty() && line->back() == '\r') line->pop_back();
  return true;
}

std::string Pieces(const Model& model, const std::vector<TokenId>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += kPieceSeparator;
    out += unicode::Escape(model.vocab.token(ids[i]).bytes, kPieceSeparator);
  }
  return out;
}

std::vector<TokenId> ParseIds(std::string_view line, size_t line_number) {
  std::vector<TokenId> ids;
  size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == ' ' || line[pos] == '\t') {
      ++pos;
      continue;
    }
    TokenId id = 0;
    const auto res = std::from_chars(line.data() + pos, line.data() + line.size(), id);
    if (res.ec != std::errc() ||
        (res.ptr != line.data() + line.size() && *res.ptr != ' ' && *res.ptr != '\t')) {
      throw Error("line " + std::to_string(line_number) + ": malformed token id");
    }
    ids.push_back(id);
    pos = static_cast<size_t>(res.ptr - line.data());
  }
  return ids;
}

struct TrainFlags {
  std::vector<std::string> corpus;
  size_t vocab_size = 0;
  std::string pretok;
  std::string seed = "language-aware";
  std::string scoring = "branching-entropy";
  std::string algo = "thunder";
  size_t max_token_bytes = 32;
  size_t seed_cap = 1000000;
  double shrink = 0.75;
  int em_iters = 2;
  int final_em_iters = 2;
  std::string containment = "exact";
  bool keep_characters = true;
  std::string normalization = "none";
  uint64_t min_frequency = 2;
  int threads = 0;
  std::string output;
  bool quiet = false;
};

void AddTrainingFlags(CLI::App* cmd, TrainFlags* f) {
  cmd->add_option("--corpus", f->corpus, "Training text files")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--vocab-size", f->vocab_size, "Target vocabulary size")->required();
  cmd->add_option("--max-token-bytes", f->max_token_bytes, "Longest seed token");
  cmd->add_option("--seed-cap", f->seed_cap, "Seed vocabulary cap");
  cmd->add_option("--shrink", f->shrink, "Fraction kept per pruning round");
  cmd->add_option("--em-iters", f->em_iters, "EM iterations per round");
  cmd->add_option("--final-em-iters", f->final_em_iters, "EM iterations after pruning");
  cmd->add_option("--containment", f->containment, "exact|approx");
  cmd->add_flag("--keep-characters,!--no-keep-characters", f->keep_characters,
                "Prune single characters last (default on)");
  cmd->add_option("--normalization", f->normalization, "none|nfc");
  cmd->add_option("--threads", f->threads, "Worker threads (0: all cores)");
  cmd->add_flag("-q,--quiet", f->quiet, "No progress output");
}

TrainerConfig MakeTrainerConfig(const TrainFlags& f, std::ostream* log) {
  TrainerConfig config;
  config.vocab_size = f.vocab_size;
  config.pretok = ParseFlag("--pretok", [&] {
    return f.pretok.empty() ? PretokMode::kThunder : ParsePretokMode(f.pretok);
  });
  config.seed_mode = ParseFlag("--seed", [&] { return ParseSeedMode(f.seed); });
  config.scoring = ParseFlag("--scoring", [&] { return ParseScoringMode(f.scoring); });
  config.max_token_bytes = f.max_token_bytes;
  config.seed_cap = f.seed_cap;
  config.shrink_factor = f.shrink;
  config.em_iters_per_round = f.em_iters;
  config.final_em_iters = f.final_em_iters;
  config.containment =
      ParseFlag("--containment", [&] { return ParseContainmentMode(f.containment); });
  config.keep_characters = f.keep_characters;
  config.normalization =
      ParseFlag("--normalization", [&] { return ParseNormalization(f.normalization); });
  config.threads = f.threads;
  config.log = f.quiet ? nullptr : log;
  ParseFlag("configuration", [&] {
    config.Validate();
    return 0;
  });
  return config;
}

int RunTrain(const TrainFlags& f, std::ostream& err) {
  if (f.algo == "bpe") {
    BpeConfig config;
    config.vocab_size = f.vocab_size;
    config.pretok = ParseFlag("--pretok", [&] {
      return f.pretok.empty() ? PretokMode::kGpt2 : ParsePretokMode(f.pretok);
    });
    config.min_frequency = f.min_frequency;
    config.normalization =
        ParseFlag("--normalization", [&] { return ParseNormalization(f.normalization); });
    config.log = f.quiet ? nullptr : &err;
    if (config.vocab_size < 257) {
      throw UsageError("--vocab-size must be at least 257 (256 bytes + 1)");
    }
    const Model model = BpeTrain(config, LoadCorpus(f.corpus, config.normalization));
    SaveModel(model, f.output);
    return 0;
  }
  if (f.algo != "thunder") throw UsageError("--algo must be thunder or bpe");
  const TrainerConfig config = MakeTrainerConfig(f, &err);
  const Model model = Train(config, f.corpus);
  SaveModel(model, f.output);
  return 0;
}

int RunEncode(const std::string& path, bool pieces, std::istream& in,
              std::ostream& out) {
  const Model model = LoadModel(path);
  std::string line;
  size_t line_number = 0;
  while (ReadLine(in, &line)) {
    ++line_number;
    if (const auto bad = unicode::FindInvalid(line)) {
      throw Utf8Error("stdin:" + std::to_string(line_number) +
                          ": invalid UTF-8 at byte offset " + std::to_string(*bad),
                      *bad);
    }
    const std::vector<TokenId> ids = Encode(model, line);
    if (pieces) {
      out << Pieces(model, ids);
    } else {
      for (size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
    }
    out << '\n';
  }
  return 0;
}

int RunDecode(const std::string& path, std::istream& in, std::ostream& out) {
  const Model model = LoadModel(path);
  std::string line;
  size_t line_number = 0;
  while (ReadLine(in, &line)) {
    ++line_number;
    try {
      out << Decode(model, ParseIds(line, line_number)) << '\n';
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      throw Error("line " + std::to_string(line_number) + ": " + what);
    }
  }
  return 0;
}

struct InspectFlags {
  std::string model;
  bool tokens = false;
  std::string pretok_dump;
  std::vector<std::string> seed_corpus;
  std::string seed = "language-aware";
  std::string pretok = "thunder";
  size_t max_token_bytes = 32;
  size_t limit = 50;
};

int RunInspect(const InspectFlags& f, std::istream& in, std::ostream& out) {
  if (f.model.empty() && f.pretok_dump.empty() && f.seed_corpus.empty()) {
    throw UsageError("inspect needs --model, --pretok-dump or --seed-corpus");
  }
  if (!f.model.empty()) {
    const Model model = LoadModel(f.model);
    if (f.tokens) {
      out << "id\tpiece\tlog_prob\tscore\tcategory\n";
      for (size_t id = 0; id < model.vocab.size(); ++id) {
        const Token& t = model.vocab.token(static_cast<TokenId>(id));
        out << id << '\t' << unicode::Escape(t.bytes, "\t") << '\t' << t.log_prob
            << '\t';
        if (t.score) {
          out << *t.score;
        } else {
          out << '-';
        }
        out << '\t' << ToString(Categorize(t.bytes)) << '\n';
      }
    } else {
      nlohmann::ordered_json j;
      j["kind"] = ToString(model.kind);
      j["pretok"] = ToString(model.pretok);
      j["size"] = model.vocab.size();
      j["stats"] = ToJson(ComputeVocabStats(model.vocab));
      const VocabStats stats = ComputeVocabStats(model.vocab);
      j["multi_word_or_punct_percent"] =
          100.0 * (stats.share(VocabCategory::kMultiWord) +
                   stats.share(VocabCategory::kWordWithPunct));
      out << j.dump(2) << '\n';
    }
  }
  if (!f.pretok_dump.empty()) {
    const PretokMode mode =
        ParseFlag("--pretok-dump", [&] { return ParsePretokMode(f.pretok_dump); });
    std::string line;
    size_t line_number = 0;
    while (ReadLine(in, &line)) {
      ++line_number;
      unicode::CheckValid(line, "stdin:" + std::to_string(line_number));
      const std::vector<Chunk> chunks = Pretokenize(line, mode);
      for (size_t i = 0; i < chunks.size(); ++i) {
        if (i > 0) out << kPieceSeparator;
        out << unicode::Escape(chunks[i].bytes, kPieceSeparator);
      }
      out << '\n';
    }
  }
  if (!f.seed_corpus.empty()) {
    SeedConfig config;
    config.mode = ParseFlag("--seed", [&] { return ParseSeedMode(f.seed); });
    config.max_token_bytes = f.max_token_bytes;
    const PretokMode mode = ParseFlag("--pretok", [&] { return ParsePretokMode(f.pretok); });
    const SentenceTable sentences = LoadCorpus(f.seed_corpus);
    const SeedVocabulary seed = BuildSeed(BuildChunkTable(sentences, mode), config);
    out << "count\tshape\tpiece\n";
    for (size_t i = 0; i < seed.candidates.size() && i < f.limit; ++i) {
      const SeedCandidate& c = seed.candidates[i];
      out << c.count << '\t' << ToString(c.shape) << '\t'
          << unicode::Escape(c.bytes, "\t") << '\n';
    }
  }
  return 0;
}

struct AblateFlags {
  TrainFlags train;
  std::vector<std::string> eval;
  std::string models_dir;
};

int RunAblate(const AblateFlags& f, std::ostream& err) {
  std::ofstream tsv(f.train.output, std::ios::binary | std::ios::trunc);
  if (!tsv) throw IoError("cannot open " + f.train.output + " for writing");
  if (!f.models_dir.empty()) std::filesystem::create_directories(f.models_dir);
  // Validate every configuration before spending time on training.
  std::vector<TrainerConfig> grid;
  for (const char* pretok : {"thunder", "gpt2"}) {
    for (const char* seed : {"language-aware", "all-ngrams"}) {
      for (const char* scoring : {"branching-entropy", "likelihood"}) {
        TrainFlags flags = f.train;
        flags.pretok = pretok;
        flags.seed = seed;
        flags.scoring = scoring;
        grid.push_back(MakeTrainerConfig(flags, &err));
      }
    }
  }
  const SentenceTable sentences = LoadCorpus(f.train.corpus, grid[0].normalization);
  tsv << "pretok\tseed\tscoring\tfertility\ttokens\twords\n";
  for (const TrainerConfig& config : grid) {
    const std::string name = std::string(ToString(config.pretok)) + "_" +
                             std::string(ToString(config.seed_mode)) + "_" +
                             std::string(ToString(config.scoring));
    if (!f.train.quiet) err << "ablate: training " << name << "\n";
    const Model model = Train(config, sentences);
    if (!f.models_dir.empty()) {
      SaveModel(model, (std::filesystem::path(f.models_dir) / (name + ".model")).string());
    }
    const FertilityReport report = Fertility(model, f.eval, config.threads);
    char fert[32];
    std::snprintf(fert, sizeof(fert), "%.6f", report.aggregate.fertility());
    tsv << ToString(config.pretok) << '\t' << ToString(config.seed_mode) << '\t'
        << ToString(config.scoring) << '\t' << fert << '\t'
        << report.aggregate.tokens << '\t' << report.aggregate.words << '\n';
    tsv.flush();
  }
  if (!tsv) throw IoError("failed writing " + f.train.output);
  return 0;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Korean-aware unigram tokenizer toolkit", "thunder-tok"};
  app.require_subcommand(1);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Train a tokenizer model");
  AddTrainingFlags(train_cmd, &train);
  train_cmd->add_option("--pretok", train.pretok,
                        "thunder|gpt2 (default: thunder, gpt2 for --algo bpe)");
  train_cmd->add_option("--seed", train.seed, "language-aware|all-ngrams");
  train_cmd->add_option("--scoring", train.scoring, "branching-entropy|likelihood");
  train_cmd->add_option("--algo", train.algo, "thunder|bpe");
  train_cmd->add_option("--min-frequency", train.min_frequency,
                        "Smallest pair count merged by bpe");
  train_cmd->add_option("-o,--output", train.output, "Model file")->required();

  std::string model_path;
  bool ids_flag = false, pieces_flag = false;
  auto* encode_cmd = app.add_subcommand("encode", "Encode stdin line by line");
  encode_cmd->add_option("--model", model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* ids_opt = encode_cmd->add_flag("--ids", ids_flag, "Token ids (default)");
  encode_cmd->add_flag("--pieces", pieces_flag, "Escaped pieces")->excludes(ids_opt);

  auto* decode_cmd = app.add_subcommand("decode", "Decode id lines from stdin");
  decode_cmd->add_option("--model", model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);

  std::vector<std::string> eval_corpus;
  bool tsv_flag = false;
  int eval_threads = 0;
  auto* fert_cmd = app.add_subcommand("fertility", "Tokens per word on text files");
  fert_cmd->add_option("--model", model_path, "Model file")
      ->required()
      ->check(CLI::ExistingFile);
  fert_cmd->add_option("--corpus", eval_corpus, "Text files")
      ->required()
      ->check(CLI::ExistingFile);
  fert_cmd->add_flag("--tsv", tsv_flag, "One row per file");
  fert_cmd->add_option("--threads", eval_threads, "Worker threads (0: all cores)");

  InspectFlags inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Vocabulary statistics and dumps");
  inspect_cmd->add_option("--model", inspect.model, "Model file")
      ->check(CLI::ExistingFile);
  inspect_cmd->add_flag("--tokens", inspect.tokens, "Print the token table");
  inspect_cmd->add_option("--pretok-dump", inspect.pretok_dump,
                          "Split stdin lines with thunder|gpt2");
  inspect_cmd->add_option("--seed-corpus", inspect.seed_corpus,
                          "Print the top seed candidates of these files")
      ->check(CLI::ExistingFile);
  inspect_cmd->add_option("--seed", inspect.seed, "language-aware|all-ngrams");
  inspect_cmd->add_option("--pretok", inspect.pretok, "thunder|gpt2");
  inspect_cmd->add_option("--max-token-bytes", inspect.max_token_bytes,
                          "Longest seed token");
  inspect_cmd->add_option("--limit", inspect.limit, "Seed rows to print");

  std::string model_a, model_b;
  auto* compare_cmd = app.add_subcommand("compare", "Vocabulary overlap of two models");
  compare_cmd->add_option("model_a", model_a, "First model")
      ->required()
      ->check(CLI::ExistingFile);
  compare_cmd->add_option("model_b", model_b, "Second model")
      ->required()
      ->check(CLI::ExistingFile);

  AblateFlags ablate;
  auto* ablate_cmd =
      app.add_subcommand("ablate", "Train the pretok x seed x scoring grid");
  AddTrainingFlags(ablate_cmd, &ablate.train);
  ablate_cmd->add_option("--eval", ablate.eval, "Held-out text files")
      ->required()
      ->check(CLI::ExistingFile);
  ablate_cmd->add_option("--models-dir", ablate.models_dir, "Keep trained models here");
  ablate_cmd->add_option("-o,--output", ablate.train.output, "TSV table")->required();

  try {
    const int threads = DefaultThreads();
    train.threads = ablate.train.threads = eval_threads = threads;
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const UsageError& e) {
    err << "thunder-tok: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*train_cmd) return RunTrain(train, err);
    if (*encode_cmd) return RunEncode(model_path, pieces_flag, in, out);
    if (*decode_cmd) return RunDecode(model_path, in, out);
    if (*fert_cmd) {
      const FertilityReport report =
          Fertility(LoadModel(model_path), eval_corpus, eval_threads);
      if (tsv_flag) {
        out << ToTsv(report);
      } else {
        out << ToJson(report).dump(2) << '\n';
      }
      return 0;
    }
    if (*inspect_cmd) return RunInspect(inspect, in, out);
    if (*compare_cmd) {
      const VocabOverlap o =
          ComputeOverlap(LoadModel(model_a).vocab, LoadModel(model_b).vocab);
      nlohmann::ordered_json j;
      j["shared"] = o.shared;
      j["only_a"] = o.only_a;
      j["only_b"] = o.only_b;
      out << j.dump() << '\n';
      return 0;
    }
    if (*ablate_cmd) return RunAblate(ablate, err);
  } catch (const UsageError& e) {
    err << "thunder-tok: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "thunder-tok: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace thunder
