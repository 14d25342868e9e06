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

#ifndef THUNDER_TESTS_TEST_UTIL_H_
#define THUNDER_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "thunder/unicode.h"

namespace thunder::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(THUNDER_TEST_DATA_DIR) + "/" + name;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "thunder") {
    std::random_device rd;
    for (;;) {
      path_ = std::filesystem::temp_directory_path() /
              (tag + "-" + std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string File(const std::string& name) const { return (path_ / name).string(); }
  std::string Write(const std::string& name, std::string_view content) const {
    const std::string p = File(name);
    std::ofstream out(p, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::string> ReadLines(const std::string& path) {
  std::vector<std::string> lines;
  std::ifstream in(path, std::ios::binary);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Random valid UTF-8 drawn from a mix of scripts, digits, punctuation and
// whitespace, with occasional arbitrary scalars.
inline std::string RandomMixedText(std::mt19937_64& rng, size_t max_scalars) {
  static const std::u32string kPool =
      U"가나다라마바사아자차카타파하한국어영사전말이달린다니요습ㄱㅏ"
      U"abcdefghijklmnopqrstuvwxyzABCXYZ"
      U"0123456789٣²Ⅻ"
      U".,?!'\"()[]-:;「」·…%#$@~"
      U"  \t　 "
      U"éßΩжあア漢字😀🏽́";
  std::uniform_int_distribution<size_t> len(0, max_scalars);
  std::uniform_int_distribution<size_t> pick(0, kPool.size() - 1);
  std::uniform_int_distribution<int> wild(0, 19);
  std::uniform_int_distribution<uint32_t> any(1, 0x10FFFF);
  std::string out;
  const size_t n = len(rng);
  for (size_t i = 0; i < n; ++i) {
    char32_t cp = kPool[pick(rng)];
    if (wild(rng) == 0) {
      do {
        cp = any(rng);
      } while (cp >= 0xD800 && cp <= 0xDFFF);
    }
    unicode::AppendUtf8(cp, &out);
  }
  return out;
}

}  // namespace thunder::testing

#endif  // THUNDER_TESTS_TEST_UTIL_H_
