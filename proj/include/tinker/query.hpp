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
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tinker/graph.hpp"

namespace tinker {

struct QueryTerm {
  enum class Kind { kVariable, kLabel, kId };
  Kind kind = Kind::kId;
  std::string text;  // variable name without '?', label, id, or property name

  bool IsVariable() const { return kind == Kind::kVariable; }
  bool operator==(const QueryTerm&) const = default;
};

// `head relation tail`, or the class atom `head a <Class>` when class_atom is
// set (tail.text then holds the class name).
struct QueryPattern {
  QueryTerm head;
  QueryTerm relation;
  QueryTerm tail;
  bool class_atom = false;

  bool operator==(const QueryPattern&) const = default;
};

struct Query {
  std::vector<std::string> select;  // every variable, in first-use order, by default
  std::vector<QueryPattern> patterns;
};

// Grammar: [select ?v... | select *] where { <pattern> . <pattern> ... }, or a
// bare pattern list. Terms are ?var, "quoted label" or a bare entity id.
// Throws SyntaxError, including for an empty pattern block.
Query ParseQuery(std::string_view text);

// Variable name -> entity id (or property name for relation variables).
using BindingSet = std::map<std::string, std::string>;

// Natural join of all patterns, greedy most-constrained-first. Result holds
// full bindings, sorted and unique. Labels resolve through `aliases`; an
// unresolvable label yields no rows. Throws UnknownProperty / UnknownClass.
std::vector<BindingSet> Evaluate(const KnowledgeGraph& kg, const Query& query,
                                 bool include_inferred = true,
                                 const AliasTable& aliases = {});

// Rows of the selected variables, sorted and deduplicated.
std::vector<std::vector<std::string>> Project(const std::vector<BindingSet>& rows,
                                              const std::vector<std::string>& select);

// Expected properties of the entity's class that it never heads.
// Throws UnknownEntity and NoExpectationDefined.
std::set<std::string> CqMissingInfo(const KnowledgeGraph& kg, std::string_view entity_id,
                                    bool include_inferred = true);

struct SharedFeatures {
  std::string a;
  std::string b;
  std::set<std::pair<std::string, std::string>> shared;  // (relation, neighbor)

  bool operator==(const SharedFeatures&) const = default;
};

// Same-class pairs sharing at least k outgoing (relation, neighbor) pairs,
// largest overlap first, then by ids. Throws InvalidArgument when k < 1.
std::vector<SharedFeatures> CqSharedFeatures(const KnowledgeGraph& kg, std::size_t k,
                                             bool include_inferred = true);

// Relations followed by CqImpact.
const std::set<std::string, std::less<>>& ImpactRelations();

// The entity, its impact-relation neighbors, and those neighbors'
// impact-relation edges to Organization or Location entities.
// Throws UnknownEntity.
KnowledgeGraph CqImpact(const KnowledgeGraph& kg, std::string_view entity_id,
                        bool include_inferred = true);

}  // namespace tinker
