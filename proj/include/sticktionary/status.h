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

#ifndef STICKTIONARY_STATUS_H_
#define STICKTIONARY_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sticktionary {

enum class ErrorCode {
  kInvalidArgument,
  kValidation,
  kNotFound,
  kConflict,
  kUnauthorized,
  kCorruptLog,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for all library failures. `field` names the
// offending input (a query text, a JSON key) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

inline Error InvalidArgumentError(const std::string& msg) {
  return Error(ErrorCode::kInvalidArgument, msg);
}
inline Error ValidationError(const std::string& msg, std::string field = {}) {
  return Error(ErrorCode::kValidation, msg, std::move(field));
}
inline Error NotFoundError(const std::string& msg) {
  return Error(ErrorCode::kNotFound, msg);
}
inline Error ConflictError(const std::string& msg) {
  return Error(ErrorCode::kConflict, msg);
}
inline Error UnauthorizedError(const std::string& msg) {
  return Error(ErrorCode::kUnauthorized, msg);
}
inline Error CorruptLogError(const std::string& msg) {
  return Error(ErrorCode::kCorruptLog, msg);
}
inline Error IoError(const std::string& msg) {
  return Error(ErrorCode::kIo, msg);
}

}  // namespace sticktionary

#endif  // STICKTIONARY_STATUS_H_
