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

// Slow reference implementations used to cross-check the library. They share
// no code with the engine beyond the graph's plain accessors.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tinker/graph.hpp"
#include "tinker/inference.hpp"
#include "tinker/query.hpp"

namespace tinker::testing {

// ---------------------------------------------------------------------------
// Query: patterns joined in written order by scanning every triple.

inline std::vector<BindingSet> NaiveEvaluate(const KnowledgeGraph& kg, const Query& q,
                                             bool include_inferred) {
  for (const auto& p : q.patterns) {
    for (const auto* t : {&p.head, &p.tail}) {
      if (t->kind != QueryTerm::Kind::kVariable && t->kind != QueryTerm::Kind::kId && !p.class_atom) {
        throw std::logic_error("oracle handles ids and variables only");
      }
    }
  }
  auto unify = [](const QueryTerm& t, const std::string& v, BindingSet& b) {
    if (!t.IsVariable()) return t.text == v;
    auto [it, inserted] = b.emplace(t.text, v);
    return inserted || it->second == v;
  };
  std::vector<BindingSet> rows{BindingSet{}};
  for (const auto& p : q.patterns) {
    std::vector<BindingSet> next;
    for (const auto& row : rows) {
      if (p.class_atom) {
        for (const auto& [id, e] : kg.entities()) {
          BindingSet b = row;
          if (kg.schema().IsSubclass(e.class_name, p.tail.text) && unify(p.head, id, b)) {
            next.push_back(b);
          }
        }
        continue;
      }
      for (const auto& t : kg.triples()) {
        if (!include_inferred && !t.asserted) continue;
        BindingSet b = row;
        if (unify(p.head, t.key.head, b) && unify(p.relation, t.key.relation, b) &&
            unify(p.tail, t.key.tail, b)) {
          next.push_back(b);
        }
      }
    }
    rows = std::move(next);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

// ---------------------------------------------------------------------------
// Inference: naive rounds over the whole triple set until neither the triple
// set nor the set of derivations grows.

struct NaiveFixpoint {
  std::set<TripleKey> keys;
  std::map<TripleKey, std::set<Provenance>> derivations;  // new inferred provenance
  std::size_t added = 0;
};

inline NaiveFixpoint NaiveInfer(const KnowledgeGraph& kg, const std::vector<Rule>& rules) {
  NaiveFixpoint out;
  for (const auto& t : kg.triples()) out.keys.insert(t.key);
  const std::set<TripleKey> original = out.keys;

  auto resolve = [&](const RuleTerm& t) -> std::optional<std::string> {
    for (const auto& c : t.candidates) {
      if (kg.FindEntity(c)) return c;
    }
    return std::nullopt;
  };
  using Env = std::map<std::string, std::string>;
  auto unify = [&](const RuleTerm& t, const std::string& v, Env& env) {
    if (!t.is_variable) {
      auto c = resolve(t);
      return c && *c == v;
    }
    auto [it, inserted] = env.emplace(t.name, v);
    return inserted || it->second == v;
  };
  auto value = [&](const RuleTerm& t, const Env& env) -> std::optional<std::string> {
    if (!t.is_variable) return resolve(t);
    auto it = env.find(t.name);
    return it == env.end() ? std::nullopt : std::optional<std::string>(it->second);
  };

  for (bool changed = true; changed;) {
    changed = false;
    const std::vector<TripleKey> snapshot(out.keys.begin(), out.keys.end());
    std::vector<std::pair<TripleKey, Provenance>> found;
    for (const auto& rule : rules) {
      if (!rule.enabled) continue;
      // Nested loops: one choice of triple per body pattern.
      std::vector<std::size_t> pick(rule.body.size(), 0);
      std::function<void(std::size_t, Env)> walk = [&](std::size_t i, Env env) {
        if (i == rule.body.size()) {
          auto h = value(rule.head.head, env);
          auto t = value(rule.head.tail, env);
          if (!h || !t) return;
          TripleKey key{*h, rule.head.relation, *t};
          if (kg.CheckTriple(key)) return;
          std::vector<TripleKey> premises;
          for (auto k : pick) premises.push_back(snapshot[k]);
          found.emplace_back(key, Provenance::Inferred(rule.name, premises));
          return;
        }
        const auto& p = rule.body[i];
        for (std::size_t k = 0; k < snapshot.size(); ++k) {
          const auto& s = snapshot[k];
          if (s.relation != p.relation) continue;
          Env e = env;
          if (unify(p.head, s.head, e) && unify(p.tail, s.tail, e)) {
            pick[i] = k;
            walk(i + 1, e);
          }
        }
      };
      walk(0, {});
    }
    for (auto& [key, prov] : found) {
      if (out.keys.insert(key).second) changed = true;
      if (out.derivations[key].insert(prov).second) changed = true;
    }
  }
  for (const auto& k : out.keys) {
    if (!original.contains(k)) ++out.added;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coverage: the fewest classes whose counts reach the threshold, found by
// enumerating every subset.

inline std::size_t MinCoverSize(const std::map<std::string, std::size_t>& dist, double threshold) {
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  for (const auto& [c, n] : dist) {
    counts.push_back(n);
    total += n;
  }
  std::size_t best = counts.size();
  for (std::uint32_t mask = 0; mask < (1u << counts.size()); ++mask) {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (mask & (1u << i)) sum += counts[i];
    }
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (static_cast<double>(sum) + 1e-9 * static_cast<double>(total) >=
            threshold * static_cast<double>(total) &&
        size < best) {
      best = size;
    }
  }
  return best;
}

// Largest sum reachable with exactly `k` classes.
inline std::size_t MaxSumOfSize(const std::map<std::string, std::size_t>& dist, std::size_t k) {
  std::vector<std::size_t> counts;
  for (const auto& [c, n] : dist) counts.push_back(n);
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << counts.size()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (mask & (1u << i)) sum += counts[i];
    }
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace tinker::testing
