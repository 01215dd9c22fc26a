// Copyright 2026 The Tinker Authors.
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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tinker {

// Every failure the library reports carries one of these kinds. The C API
// maps them one-to-one onto tinker_status codes.
enum class ErrorKind {
  kSyntax,
  kValidation,
  kUnknownClass,
  kUnknownProperty,
  kUnknownEntity,
  kUnknownTriple,
  kEmptyDocument,
  kEncoding,
  kOffsetMismatch,
  kDanglingArg,
  kDomainRangeViolation,
  kSchemaMismatch,
  kForeignNamespace,
  kInvalidRule,
  kEmptyLabel,
  kNoExpectationDefined,
  kEmptyDistribution,
  kIo,
  kInvalidArgument,
};

std::string_view ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message,
        std::optional<std::size_t> line = std::nullopt,
        std::string subject = {});

  ErrorKind kind() const { return kind_; }
  // 1-based line number in the offending input, when one applies.
  const std::optional<std::size_t>& line() const { return line_; }
  // Identifier the error is about (annotation id, class name, ...).
  const std::string& subject() const { return subject_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
  std::string subject_;
};

}  // namespace tinker
