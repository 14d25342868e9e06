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

#ifndef THUNDER_UNICODE_H_
#define THUNDER_UNICODE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace thunder::unicode {

// Decodes the scalar starting at `pos`. Returns the encoded length, or 0 when
// the bytes at `pos` are not a complete, well-formed UTF-8 sequence
// (overlongs, surrogates and values above U+10FFFF are rejected).
size_t DecodeOne(std::string_view s, size_t pos, char32_t* cp);

// Byte offset of the first malformed sequence, or nullopt for valid input.
std::optional<size_t> FindInvalid(std::string_view s);

inline bool IsValid(std::string_view s) { return !FindInvalid(s).has_value(); }

// Throws Utf8Error naming `context` when `s` is not valid UTF-8.
void CheckValid(std::string_view s, std::string_view context);

void AppendUtf8(char32_t cp, std::string* out);

// Number of scalars in a valid UTF-8 string.
size_t CountScalars(std::string_view s);

// General category L (\p{L}).
bool IsLetter(char32_t cp);
// General category N (\p{N}).
bool IsNumber(char32_t cp);
// White_Space property (\s).
bool IsSpace(char32_t cp);

inline bool IsFinalMark(char32_t cp) {
  return cp == U'.' || cp == U'?' || cp == U'!';
}

// Canonical composition (NFC). Input must be valid UTF-8.
std::string NormalizeNfc(std::string_view s);

// Printable form of arbitrary bytes: valid UTF-8 passes through except for
// backslash, control characters and `extra`, which are escaped; malformed
// bytes become \xHH.
std::string Escape(std::string_view bytes, std::string_view extra = {});

// Inverse of Escape. Throws Error on malformed escapes.
std::string Unescape(std::string_view text);

}  // namespace thunder::unicode

#endif  // THUNDER_UNICODE_H_
