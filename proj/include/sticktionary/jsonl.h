// Copyright 2026 The Sticktionary Authors.
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

// Line-delimited JSON helpers shared by the file formats.

#ifndef STICKTIONARY_JSONL_H_
#define STICKTIONARY_JSONL_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace sticktionary {

using Json = nlohmann::ordered_json;

// Calls `fn(value, line_no)` for each non-blank line. Unreadable files throw
// Io; a line that fails to parse, or for which `fn` throws, throws
// Validation prefixed with "<path>:<line>".
void ForEachJsonLine(const std::string& path,
                     const std::function<void(const Json&, std::size_t)>& fn);

// Writes `contents` to `path`, replacing it. Throws Io.
void WriteFile(const std::string& path, std::string_view contents);

std::string ReadFile(const std::string& path);

// Typed field access that reports the missing/mistyped key as a Validation
// error naming the field.
std::string RequireString(const Json& j, const char* key);

}  // namespace sticktionary

#endif  // STICKTIONARY_JSONL_H_
