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

#include "sticktionary/jsonl.h"

#include <fstream>
#include <sstream>

#include "sticktionary/status.h"

namespace sticktionary {

void ForEachJsonLine(const std::string& path,
                     const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    Json value;
    try {
      value = Json::parse(line);
    } catch (const Json::exception& e) {
      throw ValidationError(where + "malformed JSON (" + e.what() + ")");
    }
    try {
      fn(value, line_no);
    } catch (const Error& e) {
      throw Error(e.code() == ErrorCode::kIo ? ErrorCode::kIo : ErrorCode::kValidation,
                  where + e.what(), e.field());
    } catch (const Json::exception& e) {
      throw ValidationError(where + e.what());
    }
  }
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string RequireString(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ValidationError(std::string("missing or non-string field '") + key + "'",
                          key);
  }
  return it->get<std::string>();
}

}  // namespace sticktionary
