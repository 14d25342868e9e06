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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "test_util.h"
#include "thunder/cli.h"
#include "thunder/model.h"
#include "thunder/unicode.h"

namespace thunder {
namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "thunder-tok");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Corpus(testing::TempDir& dir) {
  std::string text;
  for (int i = 0; i < 20; ++i) {
    text += "점심 시간 12시! 영어 사전을 샀다.\n";
    text += "오늘 날씨가 좋다. 점심 먹자 " + std::to_string(i) + "\n";
  }
  return dir.Write("train.txt", text);
}

TEST_SUITE("cli") {

TEST_CASE("train, encode, decode") {
  testing::TempDir dir;
  const std::string corpus = Corpus(dir);
  const std::string model = dir.File("m.json");
  Run r = Cli({"train", "--corpus", corpus, "--vocab-size", "270", "-o", model,
               "--threads", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("round 1") != std::string::npos);

  const std::string text = "점심 시간 12시!\n오늘 날씨\n";
  r = Cli({"encode", "--model", model}, text);
  REQUIRE(r.code == 0);
  const std::string ids = r.out;
  r = Cli({"decode", "--model", model}, ids);
  CHECK(r.code == 0);
  CHECK(r.out == text);

  r = Cli({"encode", "--model", model, "--pieces"}, "점심 먹자\n");
  CHECK(r.code == 0);
  std::string joined = r.out;
  for (size_t p = joined.find(kPieceSeparator); p != std::string::npos;
       p = joined.find(kPieceSeparator)) {
    joined.erase(p, kPieceSeparator.size());
  }
  CHECK(unicode::Unescape(joined) == "점심 먹자\n");

  r = Cli({"decode", "--model", model}, "1 2 99999\n");
  CHECK(r.code == 1);
  CHECK(r.err.find("line 1") != std::string::npos);
  r = Cli({"encode", "--model", model}, "ok\n\xFF\n");
  CHECK(r.code == 1);
  CHECK(r.err.find("stdin:2") != std::string::npos);
}

TEST_CASE("bpe training and comparison") {
  testing::TempDir dir;
  const std::string corpus = Corpus(dir);
  const std::string a = dir.File("a.json");
  const std::string b = dir.File("b.json");
  REQUIRE(Cli({"train", "--algo", "bpe", "--corpus", corpus, "--vocab-size", "300", "-o",
               b, "-q"})
              .code == 0);
  CHECK(LoadModel(b).kind == ModelKind::kBpe);
  REQUIRE(Cli({"train", "--corpus", corpus, "--vocab-size", "270", "-o", a, "-q"}).code ==
          0);
  Run r = Cli({"compare", a, b});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"shared\":") != std::string::npos);

  r = Cli({"fertility", "--model", a, "--corpus", corpus, "--tsv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("*\t") != std::string::npos);
  r = Cli({"inspect", "--model", a});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"size\": 270") != std::string::npos);
  r = Cli({"inspect", "--model", a, "--tokens"});
  CHECK(r.code == 0);
  CHECK(r.out.find("id\tpiece\tlog_prob\tscore\tcategory\n") == 0);
}

TEST_CASE("inspection of pre-tokens and seeds") {
  testing::TempDir dir;
  Run r = Cli({"inspect", "--pretok-dump", "thunder"}, "점심 시간 12시!\n");
  CHECK(r.code == 0);
  CHECK(r.out == "점심 시간⎮ 12⎮시!\n");
  r = Cli({"inspect", "--seed-corpus", Corpus(dir), "--limit", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("count\tshape\tpiece\n") == 0);
}

TEST_CASE("usage errors exit with 2") {
  testing::TempDir dir;
  const std::string corpus = Corpus(dir);
  CHECK(Cli({}).code == 2);
  CHECK(Cli({"train", "--corpus", corpus, "--vocab-size", "10", "-o", dir.File("x")})
            .code == 2);
  CHECK(Cli({"train", "--corpus", corpus, "--vocab-size", "300", "--scoring", "mdl", "-o",
             dir.File("x")})
            .code == 2);
  CHECK(Cli({"train", "--corpus", dir.File("missing"), "--vocab-size", "300", "-o",
             dir.File("x")})
            .code == 2);
  CHECK(Cli({"inspect"}).code == 2);
  CHECK(Cli({"encode", "--model", corpus}, "a\n").code == 1);
  const Run help = Cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("ablate") != std::string::npos);
}

}  // TEST_SUITE

}  // namespace
}  // namespace thunder
