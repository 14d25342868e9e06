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

#ifndef THUNDER_ERRORS_H_
#define THUNDER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace thunder {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Raised for byte sequences that are not well-formed UTF-8.
class Utf8Error : public Error {
 public:
  Utf8Error(const std::string& what, size_t offset)
      : Error(what), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Model files that do not satisfy the on-disk schema.
class ModelFormatError : public Error {
 public:
  enum class Code {
    kParse,
    kUnsupportedVersion,
    kSchema,
    kNonDenseIds,
    kDuplicateToken,
    kMissingByteToken,
  };
  ModelFormatError(Code code, const std::string& what)
      : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

}  // namespace thunder

#endif  // THUNDER_ERRORS_H_
