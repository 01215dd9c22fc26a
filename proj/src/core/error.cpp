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

#include "tinker/error.hpp"

#include <utility>

namespace tinker {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSyntax: return "SyntaxError";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kUnknownClass: return "UnknownClass";
    case ErrorKind::kUnknownProperty: return "UnknownProperty";
    case ErrorKind::kUnknownEntity: return "UnknownEntity";
    case ErrorKind::kUnknownTriple: return "UnknownTriple";
    case ErrorKind::kEmptyDocument: return "EmptyDocument";
    case ErrorKind::kEncoding: return "EncodingError";
    case ErrorKind::kOffsetMismatch: return "OffsetMismatch";
    case ErrorKind::kDanglingArg: return "DanglingArg";
    case ErrorKind::kDomainRangeViolation: return "DomainRangeViolation";
    case ErrorKind::kSchemaMismatch: return "SchemaMismatch";
    case ErrorKind::kForeignNamespace: return "ForeignNamespace";
    case ErrorKind::kInvalidRule: return "InvalidRule";
    case ErrorKind::kEmptyLabel: return "EmptyLabel";
    case ErrorKind::kNoExpectationDefined: return "NoExpectationDefined";
    case ErrorKind::kEmptyDistribution: return "EmptyDistribution";
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

namespace {

std::string Format(ErrorKind kind, const std::string& message,
                   const std::optional<std::size_t>& line) {
  std::string out(ErrorKindName(kind));
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message,
             std::optional<std::size_t> line, std::string subject)
    : std::runtime_error(Format(kind, message, line)),
      kind_(kind),
      line_(line),
      subject_(std::move(subject)) {}

}  // namespace tinker
