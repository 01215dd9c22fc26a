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

#include <memory>
#include <string>

#include "tinker/graph.hpp"
#include "tinker/pipeline.hpp"
#include "tinker/schema.hpp"
#include "tinker/text.hpp"

namespace tinker::testing {

inline std::string FixturePath(const std::string& rel) {
  return std::string(TINKER_FIXTURES) + "/" + rel;
}

inline SchemaPtr DefaultSchema() {
  static const SchemaPtr schema =
      std::make_shared<const OntologySchema>(OntologySchema::Default());
  return schema;
}

inline PipelineOptions DefaultOptions(unsigned workers = 1) {
  PipelineOptions o;
  o.schema = DefaultSchema();
  o.workers = workers;
  return o;
}

// The four-triple DUSTMAN graph.
inline KnowledgeGraph DustmanGraph() {
  return BuildCorpusGraph(FixturePath("dustman"), DefaultOptions());
}

inline AliasTable Corpus3Aliases() {
  return AliasTable::Load(text::ReadFile(FixturePath("corpus3/aliases.tsv")));
}

inline KnowledgeGraph Corpus3Graph(unsigned workers = 1) {
  auto o = DefaultOptions(workers);
  o.aliases = Corpus3Aliases();
  return BuildCorpusGraph(FixturePath("corpus3"), o);
}

}  // namespace tinker::testing
