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

// Seeded generators for property tests. Everything is drawn from one
// std::mt19937_64 so a failing case reproduces from its seed.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tinker/graph.hpp"
#include "tinker/query.hpp"
#include "tinker/text.hpp"

namespace tinker::testing {

using Rng = std::mt19937_64;

inline std::size_t Uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& v) {
  return v[Uniform(rng, 0, v.size() - 1)];
}

// Labels mixing ASCII words, punctuation that must be escaped somewhere
// (quotes, '>', '\'), and non-ASCII letters.
inline std::string RandomLabel(Rng& rng) {
  static const std::vector<std::string> parts{
      "Shadow", "Pad",  "viper", "Ζευς", "Крот", "x64", "APT", "\"Q\"",
      "<b>",    "a\\b", "Dust",  "Man",  "é",    "9",   "Bear", "ops"};
  std::string s;
  const auto n = Uniform(rng, 1, 3);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += Pick(rng, parts);
  }
  return s;
}

struct GraphShape {
  std::size_t entities = 20;
  std::size_t triples = 40;
  bool provenance = true;
  double inferred_fraction = 0.2;
};

// A schema-valid graph. Entity ids are canonical slugs (IoC-style ids for
// Indicator and Vulnerability), so they survive the URI round trip.
inline KnowledgeGraph RandomGraph(Rng& rng, const SchemaPtr& schema, const GraphShape& shape) {
  KnowledgeGraph kg(schema);
  std::vector<std::string> classes;
  for (const auto& [name, def] : schema->classes()) classes.push_back(name);

  std::map<std::string, std::vector<std::string>> by_class;
  std::vector<std::string> ids;
  for (std::size_t i = 0; ids.size() < shape.entities && i < shape.entities * 4; ++i) {
    const auto& cls = Pick(rng, classes);
    std::string id;
    if (cls == "Indicator" || cls == "Vulnerability") {
      static const std::vector<std::string> stems{"Evil.exe", "loader.dll", "CVE-2020-0601",
                                                  "a.b_c~d", "host.example.com"};
      id = text::IocSlug(Pick(rng, stems) + std::to_string(i));
    } else {
      id = text::Slug(RandomLabel(rng) + " " + std::to_string(i));
    }
    if (id.empty() || kg.FindEntity(id)) continue;
    std::set<std::string> aliases;
    if (Uniform(rng, 0, 2) == 0) aliases.insert(RandomLabel(rng));
    kg.AddEntity(id, cls, RandomLabel(rng), aliases);
    ids.push_back(id);
    by_class[cls].push_back(id);
  }

  // Candidate (property, head, tail) draws; stop when enough distinct triples
  // exist or attempts run out.
  std::vector<std::string> props;
  for (const auto& [name, def] : schema->properties()) props.push_back(name);
  auto members = [&](const std::set<std::string>& allowed) {
    std::vector<std::string> out;
    for (const auto& [cls, list] : by_class) {
      for (const auto& a : allowed) {
        if (schema->IsSubclass(cls, a)) {
          out.insert(out.end(), list.begin(), list.end());
          break;
        }
      }
    }
    return out;
  };
  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> ends;
  for (const auto& p : props) {
    const auto& def = schema->Property(p);
    ends[p] = {members(def.domain), members(def.range)};
  }
  std::vector<TripleKey> added;
  for (std::size_t attempt = 0; kg.triple_count() < shape.triples && attempt < shape.triples * 20;
       ++attempt) {
    const auto& p = Pick(rng, props);
    const auto& [heads, tails] = ends[p];
    if (heads.empty() || tails.empty()) continue;
    TripleKey key{Pick(rng, heads), p, Pick(rng, tails)};
    if (key.head == key.tail || kg.FindTriple(key)) continue;
    std::vector<Provenance> prov;
    bool asserted = true;
    if (shape.provenance) {
      const bool inferred =
          !added.empty() && std::uniform_real_distribution<>(0, 1)(rng) < shape.inferred_fraction;
      if (inferred) {
        asserted = false;
        std::vector<TripleKey> premises{Pick(rng, added)};
        if (Uniform(rng, 0, 1)) premises.push_back(Pick(rng, added));
        prov.push_back(Provenance::Inferred("rule-" + std::to_string(Uniform(rng, 0, 3)),
                                            premises));
      } else {
        const auto n = Uniform(rng, 1, 2);
        for (std::size_t i = 0; i < n; ++i) {
          Provenance d;
          d.source = Uniform(rng, 0, 3) == 0 ? ProvenanceSource::kAutoIoc : ProvenanceSource::kManual;
          d.doc_id = "doc-" + std::to_string(Uniform(rng, 0, 9));
          d.sentence_index = Uniform(rng, 0, 50);
          const auto hs = Uniform(rng, 0, 500);
          const auto ts = Uniform(rng, 0, 500);
          d.head_span = {hs, hs + Uniform(rng, 1, 20)};
          d.tail_span = {ts, ts + Uniform(rng, 1, 20)};
          prov.push_back(d);
        }
      }
    }
    kg.AddTriple(key, asserted, prov);
    added.push_back(key);
  }
  return kg;
}

// A random query of 1..max_patterns patterns over the graph's vocabulary.
// Later patterns reuse an earlier variable so the join stays connected.
// Relations and constants are drawn from existing triples, weighted by use,
// so a fair share of queries have answers.
inline Query RandomQuery(Rng& rng, const KnowledgeGraph& kg, std::size_t max_patterns) {
  std::vector<std::string> ids;
  std::vector<std::string> props;
  for (const auto& t : kg.triples()) {
    props.push_back(t.key.relation);
    ids.push_back(t.key.head);
    ids.push_back(t.key.tail);
  }
  if (props.empty()) {
    for (const auto& [name, def] : kg.schema().properties()) props.push_back(name);
  }
  std::vector<std::string> classes;
  for (const auto& [name, def] : kg.schema().classes()) classes.push_back(name);

  Query q;
  std::vector<std::string> vars;      // entity variables
  std::vector<std::string> rel_vars;  // relation variables, kept apart

  // `avoid` keeps the tail from repeating the head variable most of the time;
  // self-loops are rare in valid graphs and would empty most results.
  auto term = [&](bool must_reuse, const std::string& avoid) -> QueryTerm {
    const auto roll = Uniform(rng, 0, 19);
    std::vector<std::string> reusable;
    for (const auto& v : vars) {
      if (v != avoid || roll == 0) reusable.push_back(v);
    }
    if (!reusable.empty() && (must_reuse || roll < 8)) {
      return {QueryTerm::Kind::kVariable, Pick(rng, reusable)};
    }
    if (roll < 16 || ids.empty()) {
      vars.push_back("v" + std::to_string(vars.size()));
      return {QueryTerm::Kind::kVariable, vars.back()};
    }
    if (roll < 19) return {QueryTerm::Kind::kId, Pick(rng, ids)};
    return {QueryTerm::Kind::kId, "no-such-entity"};
  };
  const auto n = Uniform(rng, 1, max_patterns);
  for (std::size_t i = 0; i < n; ++i) {
    QueryPattern p;
    p.head = term(i > 0, {});
    if (Uniform(rng, 0, 5) == 0) {
      p.class_atom = true;
      p.relation = {QueryTerm::Kind::kId, "a"};
      p.tail = {QueryTerm::Kind::kId, Pick(rng, classes)};
    } else {
      const auto r = Uniform(rng, 0, 6);
      if (r == 0 && !rel_vars.empty()) {
        p.relation = {QueryTerm::Kind::kVariable, Pick(rng, rel_vars)};
      } else if (r <= 1) {
        rel_vars.push_back("r" + std::to_string(rel_vars.size()));
        p.relation = {QueryTerm::Kind::kVariable, rel_vars.back()};
      } else {
        p.relation = {QueryTerm::Kind::kId, Pick(rng, props)};
      }
      p.tail = term(false, p.head.text);
    }
    q.patterns.push_back(p);
  }
  for (const auto& p : q.patterns) {
    for (const auto* t : {&p.head, &p.relation, &p.tail}) {
      if (t->IsVariable() && std::find(q.select.begin(), q.select.end(), t->text) == q.select.end()) {
        q.select.push_back(t->text);
      }
    }
  }
  return q;
}

}  // namespace tinker::testing
