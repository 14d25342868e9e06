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

#include <random>
#include <string>

#include "test_util.h"
#include "thunder/errors.h"
#include "thunder/unicode.h"

namespace thunder {
namespace {

TEST_SUITE("unicode") {

TEST_CASE("decoding accepts well-formed sequences") {
  char32_t cp = 0;
  CHECK(unicode::DecodeOne("a", 0, &cp) == 1);
  CHECK(cp == U'a');
  CHECK(unicode::DecodeOne("가", 0, &cp) == 3);
  CHECK(cp == U'가');
  CHECK(unicode::DecodeOne("😀", 0, &cp) == 4);
  CHECK(cp == U'😀');
}

TEST_CASE("decoding rejects malformed sequences") {
  char32_t cp = 0;
  CHECK(unicode::DecodeOne("\xC0\x80", 0, &cp) == 0);          // overlong
  CHECK(unicode::DecodeOne("\xED\xA0\x80", 0, &cp) == 0);      // surrogate
  CHECK(unicode::DecodeOne("\xF4\x90\x80\x80", 0, &cp) == 0);  // > U+10FFFF
  CHECK(unicode::DecodeOne("\xEA\xB0", 0, &cp) == 0);          // truncated
  CHECK(unicode::DecodeOne("\x80", 0, &cp) == 0);              // continuation
}

TEST_CASE("first invalid offset") {
  CHECK_FALSE(unicode::FindInvalid("안녕 hi").has_value());
  CHECK(unicode::FindInvalid(std::string("안녕") + "\xEC").value() == 6);
  CHECK_THROWS_AS(unicode::CheckValid("a\xFF", "input"), Utf8Error);
  try {
    unicode::CheckValid("ab\xFF", "input");
  } catch (const Utf8Error& e) {
    CHECK(e.offset() == 2);
  }
}

TEST_CASE("character properties") {
  CHECK(unicode::IsLetter(U'가'));
  CHECK(unicode::IsLetter(U'ㄱ'));
  CHECK(unicode::IsLetter(U'z'));
  CHECK_FALSE(unicode::IsLetter(U'1'));
  CHECK_FALSE(unicode::IsLetter(0x0301));  // combining mark
  CHECK(unicode::IsNumber(U'٣'));
  CHECK(unicode::IsNumber(U'²'));
  CHECK(unicode::IsNumber(U'Ⅻ'));
  CHECK(unicode::IsSpace(U'\t'));
  CHECK(unicode::IsSpace(0x3000));
  CHECK(unicode::IsSpace(0x00A0));
  CHECK_FALSE(unicode::IsSpace(U'_'));
}

TEST_CASE("NFC composition") {
  CHECK(unicode::NormalizeNfc("e\xCC\x81") == "é");
  // Conjoining jamo compose into one syllable.
  CHECK(unicode::NormalizeNfc("\xE1\x84\x92\xE1\x85\xA1\xE1\x86\xAB") == "한");
  CHECK(unicode::NormalizeNfc("이미 NFC") == "이미 NFC");
}

TEST_CASE("scalar count") {
  CHECK(unicode::CountScalars("") == 0);
  CHECK(unicode::CountScalars("a가😀") == 3);
}

TEST_CASE("escape round-trips arbitrary bytes") {
  CHECK(unicode::Escape("a\\b") == "a\\\\b");
  CHECK(unicode::Escape("\xFF") == "\\xFF");
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 24);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) s += static_cast<char>(byte(rng));
    if (i % 2 == 0) s = testing::RandomMixedText(rng, 12);
    const std::string e = unicode::Escape(s, "|");
    CHECK(unicode::IsValid(e));
    CHECK(e.find('|') == std::string::npos);
    CHECK(unicode::Unescape(e) == s);
  }
  CHECK_THROWS_AS(unicode::Unescape("\\q"), Error);
}

}  // TEST_SUITE

}  // namespace
}  // namespace thunder
