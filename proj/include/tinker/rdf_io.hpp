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

#include <string>
#include <string_view>

#include "tinker/graph.hpp"

namespace tinker {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// Canonical N-Triples: one `<head> <prop> <tail> .` line per triple plus one
// rdf:type line per entity, all lines sorted bytewise, LF endings.
std::string SerializeNTriples(const KnowledgeGraph& kg);

// Sidecar files that travel with a `.nt` file.
struct GraphSidecars {
  // `<name>.prov.jsonl`: one object per (triple, provenance) pair, keyed by
  // the triple's three URIs.
  std::string provenance;
  // `<name>.entities.jsonl`: display label and aliases per entity id.
  std::string entities;
};

std::string SerializeProvenance(const KnowledgeGraph& kg);
std::string SerializeEntities(const KnowledgeGraph& kg);

// Inverse of SerializeNTriples. Without sidecars every triple is asserted,
// carries no provenance, and each entity's label is its id. Throws
// SyntaxError(line), ForeignNamespace(line), UnknownClass, UnknownProperty
// and DomainRangeViolation.
KnowledgeGraph ParseNTriples(std::string_view text, SchemaPtr schema,
                             std::string base_namespace = std::string(kDefaultNamespace),
                             const GraphSidecars* sidecars = nullptr);

// Sidecar paths for a graph file: "out/g.nt" -> "out/g.prov.jsonl", ...
std::string ProvenancePath(std::string_view nt_path);
std::string EntitiesPath(std::string_view nt_path);

// Writes the `.nt` file and both sidecars.
void SaveGraph(const KnowledgeGraph& kg, const std::string& nt_path);
// Reads a `.nt` file plus whichever sidecars exist beside it.
KnowledgeGraph LoadGraph(const std::string& nt_path, SchemaPtr schema,
                         std::string base_namespace = std::string(kDefaultNamespace));

// Write-only conveniences.
std::string SerializeTurtle(const KnowledgeGraph& kg);
std::string ExportDot(const KnowledgeGraph& kg);
std::string ExportGraphml(const KnowledgeGraph& kg);

}  // namespace tinker
