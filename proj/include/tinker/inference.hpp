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
#include <string>
#include <string_view>
#include <vector>

#include "tinker/graph.hpp"

namespace tinker {

// A rule term is a variable or an entity constant. Constants from rule files
// keep every id the label may canonicalize to; the first one present in the
// graph is used.
struct RuleTerm {
  bool is_variable = false;
  std::string name;                     // variable name without '?'
  std::vector<std::string> candidates;  // constant ids

  static RuleTerm Var(std::string name);
  static RuleTerm Const(std::string id);
  bool operator==(const RuleTerm&) const = default;
};

struct RulePattern {
  RuleTerm head;
  std::string relation;
  RuleTerm tail;

  bool operator==(const RulePattern&) const = default;
};

struct Rule {
  std::string name;
  std::vector<RulePattern> body;
  RulePattern head;
  bool enabled = true;

  bool operator==(const Rule&) const = default;
};

// Throws InvalidRule for an empty name or body, head variables missing from
// the body, or relations the schema does not declare.
void ValidateRule(const Rule& rule, const OntologySchema& schema);

// sym-similarTo, inv-pairs (one rule per inverse pair, all named inv-pairs),
// variant-similar, and co-involve (disabled). Rules over relations missing
// from `schema` are left out.
std::vector<Rule> DefaultRules(const OntologySchema& schema);

// Applies a rules file on top of `base`:
//   rule <name>: (<pat>) & (<pat>) => (<pat>)
//   enable <name> | disable <name>
// A pattern is `<term> <prop> <term>` with `?var` or "quoted label" terms.
// Defining an existing name replaces every rule of that name.
std::vector<Rule> LoadRules(std::string_view text, const OntologySchema& schema,
                            const AliasTable& aliases, std::vector<Rule> base);

struct InferenceResult {
  KnowledgeGraph graph;
  std::size_t iterations = 0;  // rounds run, counting the final empty one
  std::size_t added = 0;
  std::vector<std::string> warnings;  // dropped firings, sorted, unique
};

// Semi-naive forward chaining to the least fixpoint. Inferred triples carry
// asserted=false and one provenance entry per distinct derivation.
InferenceResult ApplyRulesFixpoint(const KnowledgeGraph& kg,
                                   const std::vector<Rule>& rules);

struct Derivation {
  TripleKey key;
  bool asserted = true;
  std::vector<Provenance> sources;  // document provenance of asserted triples
  std::string rule;                 // set for inferred triples
  std::vector<Derivation> premises;
};

// Throws UnknownTriple when `key` is not in the graph.
Derivation Explain(const KnowledgeGraph& kg, const TripleKey& key);

// Indented text rendering, one triple per line.
std::string FormatDerivation(const Derivation& d);

}  // namespace tinker
