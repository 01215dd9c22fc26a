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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tinker/corpus.hpp"
#include "tinker/schema.hpp"

// Brat standoff (.ann) annotations: entity spans (T lines) and binary
// relations (R lines) over a Document's character offsets.
namespace tinker {

using Span = std::pair<std::size_t, std::size_t>;

struct EntitySpan {
  std::string ann_id;  // "T12" for hand annotations, "TA3" for extracted IoCs
  std::string class_name;
  std::vector<Span> fragments;
  std::string surface;
  std::string doc_id;
  std::size_t line = 0;  // source line in the .ann file, 0 when synthesized

  bool IsAuto() const { return ann_id.starts_with("TA"); }
  Span Extent() const { return {fragments.front().first, fragments.back().second}; }
  bool operator==(const EntitySpan&) const = default;
};

struct RelationAnn {
  std::string ann_id;
  std::string property_name;
  std::string arg1;  // head T-number
  std::string arg2;  // tail T-number
  std::string doc_id;
  std::size_t line = 0;

  bool operator==(const RelationAnn&) const = default;
};

struct AnnotationWarning {
  std::size_t line = 0;
  std::string ann_id;  // leading id token of the skipped line ("A1", "#2")
  std::string message;

  bool operator==(const AnnotationWarning&) const = default;
};

struct AnnotationSet {
  std::string doc_id;
  std::vector<EntitySpan> entities;
  std::vector<RelationAnn> relations;
  std::vector<AnnotationWarning> warnings;

  const EntitySpan* FindEntity(std::string_view ann_id) const;
};

// One problem found in an annotation file. `kind` is an ErrorKind name or
// "SkippedLine" for warnings.
struct Finding {
  std::string doc_id;
  std::string ann_id;
  std::string kind;
  std::string message;
  std::size_t line = 0;

  bool IsWarning() const { return kind == "SkippedLine"; }
  std::string ToJson() const;
  bool operator==(const Finding&) const = default;
};

std::string FindingsToJsonl(const std::vector<Finding>& findings);

struct StandoffParse {
  AnnotationSet set;
  std::vector<Finding> errors;  // rejected lines; never includes warnings
};

// Parses every line it can and records the rest. Accepted T lines plus
// T lines reported in `errors` equal the T lines of the input (same for R).
StandoffParse ParseStandoffCollect(std::string_view ann_text, const Document& doc);

// Strict form: throws the first error (SyntaxError, OffsetMismatch or
// DanglingArg) as an Error.
AnnotationSet ParseStandoff(std::string_view ann_text, const Document& doc);

std::string SerializeStandoff(const AnnotationSet& set);

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const;
  std::string ToJsonl() const { return FindingsToJsonl(findings); }
};

// Schema checks: UnknownClass, UnknownProperty, DomainRangeViolation.
ValidationReport ValidateAnnotations(const AnnotationSet& set,
                                     const OntologySchema& schema);

// Everything known about one .ann file: parse errors, skipped-line warnings
// and schema findings, ordered by source line.
ValidationReport AnnotationReport(std::string_view ann_text, const Document& doc,
                                  const OntologySchema& schema);

}  // namespace tinker
