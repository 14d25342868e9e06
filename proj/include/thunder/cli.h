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

#ifndef THUNDER_CLI_H_
#define THUNDER_CLI_H_

#include <iosfwd>
#include <string_view>

namespace thunder {

// Visible separator between pieces in `encode --pieces` output.
inline constexpr std::string_view kPieceSeparator = "⎮";

// Entry point of the thunder-tok tool. Returns 0 on success, 1 on runtime
// errors and 2 on usage errors.
int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err);

}  // namespace thunder

#endif  // THUNDER_CLI_H_
