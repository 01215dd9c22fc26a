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

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tinker/corpus.hpp"
#include "tinker/schema.hpp"
#include "tinker/standoff.hpp"

namespace tinker {

inline constexpr std::string_view kDefaultNamespace = "http://tinker.example/";

// ---------------------------------------------------------------------------
// Label canonicalization

// Maps surface forms to canonical labels. Keys are case-folded except for
// Indicator/Vulnerability entries. An entry with an empty class applies to
// every class.
class AliasTable {
 public:
  // TSV lines: surface<TAB>canonical label<TAB>class (class optional).
  // Throws SyntaxError on malformed lines and ValidationError on alias cycles.
  static AliasTable Load(std::string_view tsv);

  void Add(std::string_view surface, std::string canonical,
           std::string class_name = {});

  // Canonical label for an already-cleaned surface, following alias chains.
  std::optional<std::string> Lookup(std::string_view cleaned,
                                    std::string_view class_name) const;

  bool empty() const { return entries_.empty(); }
  // Distinct non-empty class columns, sorted.
  std::set<std::string> classes() const;

 private:
  struct Entry {
    std::string canonical;
    std::string class_name;
  };
  std::optional<std::string> LookupOnce(std::string_view cleaned,
                                        std::string_view class_name) const;

  std::map<std::string, std::vector<Entry>, std::less<>> entries_;
};

// Indicator and Vulnerability labels keep their case and IoC characters.
bool KeepsCase(std::string_view class_name);

// Strips curly quotes, surrounding straight quotes and enclosing or
// unbalanced brackets, then trims whitespace.
std::string CleanSurface(std::string_view surface);

struct CanonicalLabel {
  std::string entity_id;
  std::string label;

  bool operator==(const CanonicalLabel&) const = default;
};

// Throws EmptyLabel when nothing is left after cleaning.
CanonicalLabel CanonicalizeLabel(std::string_view surface,
                                 std::string_view class_name,
                                 const AliasTable& aliases);

// Ids a free-text label could denote when its class is unknown: the plain
// slug form, then the forms under each class the alias table names, then the
// indicator form. Empty for unusable labels.
std::vector<std::string> CandidateIds(std::string_view surface,
                                      const AliasTable& aliases);

// ---------------------------------------------------------------------------
// Graph data

struct Entity {
  std::string id;
  std::string class_name;
  std::string label;
  std::set<std::string> aliases;
  std::string uri;

  bool operator==(const Entity&) const = default;
};

struct TripleKey {
  std::string head;
  std::string relation;
  std::string tail;

  std::string ToString() const;  // "⟨head, relation, tail⟩"
  auto operator<=>(const TripleKey&) const = default;
  bool operator==(const TripleKey&) const = default;
};

enum class ProvenanceSource { kManual, kAutoIoc, kInferred };

std::string_view ProvenanceSourceName(ProvenanceSource source);
std::optional<ProvenanceSource> ParseProvenanceSource(std::string_view name);

struct Provenance {
  ProvenanceSource source = ProvenanceSource::kManual;
  // Document provenance (manual, auto-ioc).
  std::string doc_id;
  std::size_t sentence_index = 0;
  Span head_span{};
  Span tail_span{};
  // Inference provenance.
  std::string rule_name;
  std::vector<TripleKey> premises;

  static Provenance Inferred(std::string rule, std::vector<TripleKey> premises);

  auto operator<=>(const Provenance&) const = default;
  bool operator==(const Provenance&) const = default;
};

struct Triple {
  TripleKey key;
  bool asserted = true;
  std::vector<Provenance> provenance;  // first derivation first
};

enum class AddResult { kAdded, kProvenanceAppended, kUnchanged };

// Entity registry plus SPO/POS/OSP triple indexes. Filled by a single writer;
// a const KnowledgeGraph is safe to share between threads.
class KnowledgeGraph {
 public:
  explicit KnowledgeGraph(SchemaPtr schema,
                          std::string base_namespace = std::string(kDefaultNamespace));

  const OntologySchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  const std::string& base_namespace() const { return namespace_; }

  std::string EntityUri(std::string_view id) const;
  std::string PropertyUri(std::string_view name) const;
  std::string ClassUri(std::string_view name) const;

  // Inserts or merges an entity. On merge, aliases union, the smaller label
  // wins, and the class becomes the more specific of the two; unrelated
  // classes throw ValidationError.
  const Entity& AddEntity(const std::string& id, const std::string& class_name,
                          const std::string& label,
                          const std::set<std::string>& aliases = {});

  const Entity* FindEntity(std::string_view id) const;
  const Entity& GetEntity(std::string_view id) const;  // throws UnknownEntity
  const std::map<std::string, Entity, std::less<>>& entities() const {
    return entities_;
  }

  // Validates endpoints and domain/range (throws DomainRangeViolation,
  // UnknownEntity, UnknownProperty). An existing key gains the provenance
  // entries it lacks; asserting an inferred triple promotes it.
  AddResult AddTriple(const TripleKey& key, bool asserted,
                      const std::vector<Provenance>& provenance = {});

  // Reason `key` would be rejected by AddTriple, or nullopt if acceptable.
  std::optional<std::string> CheckTriple(const TripleKey& key) const;

  const Triple* FindTriple(const TripleKey& key) const;
  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t triple_count() const { return triples_.size(); }
  // Triples ordered by key.
  std::vector<const Triple*> SortedTriples() const;

  // Indices into triples() of every triple matching the bound positions,
  // answered from the best index.
  std::vector<std::size_t> Match(std::optional<std::string_view> head,
                                 std::optional<std::string_view> relation,
                                 std::optional<std::string_view> tail) const;

  // True when SPO, POS and OSP each enumerate exactly the triple set.
  bool IndexesConsistent() const;

  // Entities and triples (keys and asserted flags), ignoring provenance.
  bool SameContent(const KnowledgeGraph& other) const;
  // SameContent plus equal per-triple provenance sets.
  bool operator==(const KnowledgeGraph& other) const;

 private:
  using Row = std::array<std::uint32_t, 4>;  // three term ids + triple index

  std::uint32_t InternEntity(const std::string& id);
  std::optional<std::uint32_t> EntityTerm(std::string_view id) const;
  std::optional<std::uint32_t> PropertyTerm(std::string_view name) const;

  SchemaPtr schema_;
  std::string namespace_;
  std::map<std::string, Entity, std::less<>> entities_;
  std::vector<Triple> triples_;
  std::map<TripleKey, std::size_t> key_index_;

  std::unordered_map<std::string, std::uint32_t> entity_terms_;
  std::map<std::string, std::uint32_t, std::less<>> property_terms_;
  std::set<Row> spo_;
  std::set<Row> pos_;
  std::set<Row> osp_;
};

// ---------------------------------------------------------------------------
// Construction

struct BuildOptions {
  std::string base_namespace = std::string(kDefaultNamespace);
};

// One Entity per canonical id and one asserted Triple per distinct key, each
// relation annotation contributing one Provenance. Documents are processed in
// doc-id order, so input order does not matter. Throws DomainRangeViolation
// listing every offending relation.
KnowledgeGraph BuildGraph(const std::vector<Document>& docs,
                          const std::vector<AnnotationSet>& annotations,
                          SchemaPtr schema, const AliasTable& aliases,
                          const BuildOptions& options = {});

// Union of entities and triples; provenance concatenated without duplicates.
// Throws SchemaMismatch for different schemas or namespaces.
KnowledgeGraph MergeGraphs(const KnowledgeGraph& a, const KnowledgeGraph& b);

// Induced subgraph over entities within `depth` undirected hops.
KnowledgeGraph Neighborhood(const KnowledgeGraph& kg, std::string_view entity_id,
                            std::size_t depth);

// Induced subgraph over `ids`, keeping triples accepted by `keep`.
template <typename Keep>
KnowledgeGraph Subgraph(const KnowledgeGraph& kg, const std::set<std::string>& ids,
                        Keep keep) {
  KnowledgeGraph out(kg.schema_ptr(), kg.base_namespace());
  for (const auto& id : ids) {
    const auto& e = kg.GetEntity(id);
    out.AddEntity(e.id, e.class_name, e.label, e.aliases);
  }
  for (const auto& t : kg.triples()) {
    if (ids.contains(t.key.head) && ids.contains(t.key.tail) && keep(t)) {
      out.AddTriple(t.key, t.asserted, t.provenance);
    }
  }
  return out;
}

}  // namespace tinker
