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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tinker/corpus.hpp"
#include "tinker/graph.hpp"
#include "tinker/ioc.hpp"
#include "tinker/standoff.hpp"

namespace tinker {

struct PipelineOptions {
  SchemaPtr schema;
  AliasTable aliases;
  std::string base_namespace = std::string(kDefaultNamespace);
  unsigned workers = 1;
  // Add extractor matches as auto spans; matches overlapping a hand span are
  // dropped.
  bool include_iocs = false;
  std::optional<IocExtractor> extractor;  // default patterns when unset
};

struct CorpusData {
  std::vector<Document> docs;              // sorted by doc id
  std::vector<AnnotationSet> annotations;  // parallel to docs
  ValidationReport report;                 // every finding, doc order then line
};

// Loads `dir`, parsing each document's `.ann` (absent means no annotations).
// Per-document work runs on `options.workers` threads; results are merged in
// doc-id order.
CorpusData ProcessCorpus(const std::string& dir, const PipelineOptions& options);

// Auto spans for `doc`, minus matches overlapping any span of `hand`.
std::vector<EntitySpan> AutoSpans(const Document& doc, const AnnotationSet& hand,
                                  const IocExtractor& extractor);

// ProcessCorpus then BuildGraph. Throws DomainRangeViolation (or the first
// parse error kind) when the report has violations.
KnowledgeGraph BuildCorpusGraph(const std::string& dir, const PipelineOptions& options);

// `key=value` lines, '#' comments. Throws SyntaxError(line).
std::map<std::string, std::string> ParseConfig(std::string_view text);

}  // namespace tinker
