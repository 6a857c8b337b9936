// Copyright 2026 The uqnet Authors
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

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace uqnet {

// Broad classes of failure. Callers map these to exit codes or HTTP status.
enum class ErrorKind {
  kInvalidArgument,  // bad input, precondition violated, validation failure
  kNotFound,
  kConflict,
  kNumerical,        // factorization failed, non-finite objective, ...
  kParse,            // malformed document or CSV
  kInternal,
};

// Structured error carrying a stable machine-readable code and free-form
// context (key/value pairs such as row, column, dimension names).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message,
        std::map<std::string, std::string> context = {})
      : std::runtime_error(message),
        kind_(kind),
        code_(std::move(code)),
        context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::map<std::string, std::string>& context() const noexcept { return context_; }

  Error&& with(std::string key, std::string value) && {
    context_[std::move(key)] = std::move(value);
    return std::move(*this);
  }

 private:
  ErrorKind kind_;
  std::string code_;
  std::map<std::string, std::string> context_;
};

inline Error invalid_argument(std::string code, const std::string& message,
                              std::map<std::string, std::string> context = {}) {
  return Error(ErrorKind::kInvalidArgument, std::move(code), message, std::move(context));
}

inline Error numerical_failure(std::string code, const std::string& message,
                               std::map<std::string, std::string> context = {}) {
  return Error(ErrorKind::kNumerical, std::move(code), message, std::move(context));
}

inline Error parse_error(std::string code, const std::string& message,
                         std::map<std::string, std::string> context = {}) {
  return Error(ErrorKind::kParse, std::move(code), message, std::move(context));
}

// Throws a dimension_mismatch error naming both sizes.
void require_same_dimension(const char* what, long expected, long actual);

}  // namespace uqnet
