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

#include "tinker/inference.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <set>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

RuleTerm RuleTerm::Var(std::string name) { return {true, std::move(name), {}}; }

RuleTerm RuleTerm::Const(std::string id) { return {false, {}, {std::move(id)}}; }

void ValidateRule(const Rule& rule, const OntologySchema& schema) {
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::kInvalidRule, "rule '" + rule.name + "': " + msg,
                std::nullopt, rule.name);
  };
  if (rule.name.empty()) fail("empty name");
  if (rule.body.empty()) fail("empty body");
  std::set<std::string> vars;
  for (const auto& p : rule.body) {
    if (!schema.HasProperty(p.relation)) fail("undeclared relation " + p.relation);
    for (const auto* t : {&p.head, &p.tail}) {
      if (t->is_variable) {
        vars.insert(t->name);
      } else if (t->candidates.empty()) {
        fail("constant with no usable id");
      }
    }
  }
  if (!schema.HasProperty(rule.head.relation)) {
    fail("undeclared relation " + rule.head.relation);
  }
  for (const auto* t : {&rule.head.head, &rule.head.tail}) {
    if (t->is_variable && !vars.contains(t->name)) {
      fail("head variable ?" + t->name + " does not occur in the body");
    }
    if (!t->is_variable && t->candidates.empty()) fail("constant with no usable id");
  }
}

namespace {

RulePattern Pat(std::string a, std::string rel, std::string b) {
  return {RuleTerm::Var(std::move(a)), std::move(rel), RuleTerm::Var(std::move(b))};
}

const std::regex& VarName() {
  static const std::regex re("[a-z][a-z0-9_]*");
  return re;
}

// Splits on `sep` outside double quotes.
std::vector<std::string_view> SplitOutsideQuotes(std::string_view s,
                                                 std::string_view sep) {
  std::vector<std::string_view> parts;
  bool quoted = false;
  std::size_t from = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && s.substr(i, sep.size()) == sep) {
      parts.push_back(s.substr(from, i - from));
      from = i + sep.size();
      i += sep.size() - 1;
    }
  }
  parts.push_back(s.substr(from));
  return parts;
}

RuleTerm ParseTerm(std::string_view tok, const AliasTable& aliases, std::size_t line) {
  if (tok.size() > 1 && tok.front() == '?') {
    const std::string name(tok.substr(1));
    if (!std::regex_match(name, VarName())) {
      throw Error(ErrorKind::kSyntax, "bad variable name ?" + name, line);
    }
    return RuleTerm::Var(name);
  }
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
    RuleTerm t;
    t.candidates = CandidateIds(tok.substr(1, tok.size() - 2), aliases);
    if (t.candidates.empty()) {
      throw Error(ErrorKind::kInvalidRule, "unusable label " + std::string(tok), line);
    }
    return t;
  }
  throw Error(ErrorKind::kSyntax,
              "expected ?variable or quoted label, got '" + std::string(tok) + "'", line);
}

RulePattern ParsePattern(std::string_view s, const AliasTable& aliases,
                         std::size_t line) {
  s = text::TrimAscii(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw Error(ErrorKind::kSyntax, "pattern must be parenthesized", line);
  }
  s = s.substr(1, s.size() - 2);
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (s[i] == '"') {
      j = s.find('"', i + 1);
      if (j == std::string_view::npos) {
        throw Error(ErrorKind::kSyntax, "unterminated label", line);
      }
      ++j;
    } else {
      while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    }
    toks.push_back(s.substr(i, j - i));
    i = j;
  }
  if (toks.size() != 3) {
    throw Error(ErrorKind::kSyntax, "pattern needs exactly three terms", line);
  }
  return {ParseTerm(toks[0], aliases, line), std::string(toks[1]),
          ParseTerm(toks[2], aliases, line)};
}

}  // namespace

std::vector<Rule> DefaultRules(const OntologySchema& schema) {
  std::vector<Rule> rules;
  auto has = [&](std::initializer_list<std::string_view> names) {
    return std::all_of(names.begin(), names.end(),
                       [&](std::string_view n) { return schema.HasProperty(n); });
  };
  if (has({"similarTo"})) {
    rules.push_back({"sym-similarTo", {Pat("a", "similarTo", "b")},
                     Pat("b", "similarTo", "a"), true});
  }
  for (const auto& [name, prop] : schema.properties()) {
    if (prop.inverse_of) {
      rules.push_back({"inv-pairs", {Pat("a", name, "b")},
                       Pat("b", *prop.inverse_of, "a"), true});
    }
  }
  if (has({"variantOf", "similarTo"})) {
    rules.push_back({"variant-similar", {Pat("a", "variantOf", "b")},
                     Pat("a", "similarTo", "b"), true});
  }
  if (has({"similarTo", "involves"})) {
    rules.push_back({"co-involve",
                     {Pat("a", "similarTo", "b"), Pat("b", "involves", "c")},
                     Pat("a", "involves", "c"), false});
  }
  return rules;
}

std::vector<Rule> LoadRules(std::string_view text, const OntologySchema& schema,
                            const AliasTable& aliases, std::vector<Rule> base) {
  std::vector<Rule> rules = std::move(base);
  std::size_t line_no = 0;
  for (auto raw : text::Split(text, '\n')) {
    ++line_no;
    const auto line = text::TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find_first_of(" \t");
    const auto verb = line.substr(0, space);
    const auto rest =
        space == std::string_view::npos ? std::string_view{} : text::TrimAscii(line.substr(space));
    if (verb == "enable" || verb == "disable") {
      bool found = false;
      for (auto& r : rules) {
        if (r.name == rest) {
          r.enabled = verb == "enable";
          found = true;
        }
      }
      if (!found) {
        throw Error(ErrorKind::kInvalidRule, "no rule named '" + std::string(rest) + "'",
                    line_no, std::string(rest));
      }
      continue;
    }
    if (verb != "rule") {
      throw Error(ErrorKind::kSyntax, "expected rule, enable or disable", line_no);
    }
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::kSyntax, "missing ':' after rule name", line_no);
    }
    Rule rule;
    rule.name = std::string(text::TrimAscii(rest.substr(0, colon)));
    const auto sides = SplitOutsideQuotes(rest.substr(colon + 1), "=>");
    if (sides.size() != 2) {
      throw Error(ErrorKind::kSyntax, "rule needs exactly one '=>'", line_no);
    }
    for (auto part : SplitOutsideQuotes(sides[0], "&")) {
      rule.body.push_back(ParsePattern(part, aliases, line_no));
    }
    rule.head = ParsePattern(sides[1], aliases, line_no);
    try {
      ValidateRule(rule, schema);
    } catch (const Error& e) {
      throw Error(ErrorKind::kInvalidRule, e.what(), line_no, rule.name);
    }
    const auto first = std::find_if(rules.begin(), rules.end(),
                                    [&](const Rule& r) { return r.name == rule.name; });
    if (first == rules.end()) {
      rules.push_back(std::move(rule));
    } else {
      const auto pos = first - rules.begin();
      std::erase_if(rules, [&](const Rule& r) { return r.name == rule.name; });
      rules.insert(rules.begin() + pos, std::move(rule));
    }
  }
  return rules;
}

namespace {

using Bindings = std::vector<std::pair<std::string, std::string>>;

const std::string* Lookup(const Bindings& b, const std::string& var) {
  for (const auto& [k, v] : b) {
    if (k == var) return &v;
  }
  return nullptr;
}

// Constant terms resolved against the graph; nullopt when none of the
// candidates exists.
std::optional<std::string> ResolveConst(const KnowledgeGraph& kg, const RuleTerm& t) {
  for (const auto& id : t.candidates) {
    if (kg.FindEntity(id)) return id;
  }
  return std::nullopt;
}

// Value a term is fixed to under `b`, if any. `unresolvable` is set for
// constants naming no entity.
std::optional<std::string> Fixed(const KnowledgeGraph& kg, const RuleTerm& t,
                                 const Bindings& b, bool& unresolvable) {
  if (t.is_variable) {
    const auto* v = Lookup(b, t.name);
    return v ? std::optional<std::string>(*v) : std::nullopt;
  }
  auto id = ResolveConst(kg, t);
  if (!id) unresolvable = true;
  return id;
}

// Extends `b` so that pattern `p` matches triple `key`; false on conflict.
bool Unify(const KnowledgeGraph& kg, const RulePattern& p, const TripleKey& key,
           Bindings& b) {
  if (p.relation != key.relation) return false;
  const std::size_t mark = b.size();
  auto bind = [&](const RuleTerm& t, const std::string& value) {
    if (!t.is_variable) return ResolveConst(kg, t) == value;
    if (const auto* v = Lookup(b, t.name)) return *v == value;
    b.emplace_back(t.name, value);
    return true;
  };
  if (bind(p.head, key.head) && bind(p.tail, key.tail)) return true;
  b.resize(mark);
  return false;
}

struct Firing {
  TripleKey key;
  Provenance provenance;
};

class RoundEvaluator {
 public:
  RoundEvaluator(const KnowledgeGraph& kg, const std::vector<std::size_t>& delta,
                 std::size_t snapshot)
      : kg_(kg), delta_(delta), snapshot_(snapshot) {}

  void Run(const Rule& rule, std::vector<Firing>& firings,
           std::set<std::string>& warnings) {
    rule_ = &rule;
    firings_ = &firings;
    warnings_ = &warnings;
    for (std::size_t d = 0; d < rule.body.size(); ++d) {
      order_.clear();
      order_.push_back(d);
      for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (i != d) order_.push_back(i);
      }
      premises_.assign(rule.body.size(), nullptr);
      Bindings b;
      for (std::size_t idx : delta_) {
        const auto& t = kg_.triples()[idx];
        if (Unify(kg_, rule.body[d], t.key, b)) {
          premises_[d] = &t.key;
          Step(1, b);
          b.clear();
        }
      }
    }
  }

 private:
  void Step(std::size_t depth, Bindings& b) {
    if (depth == order_.size()) {
      Emit(b);
      return;
    }
    const auto pos = order_[depth];
    const auto& p = rule_->body[pos];
    bool unresolvable = false;
    const auto h = Fixed(kg_, p.head, b, unresolvable);
    const auto t = Fixed(kg_, p.tail, b, unresolvable);
    if (unresolvable) return;
    for (std::size_t idx : kg_.Match(h, std::string_view(p.relation), t)) {
      if (idx >= snapshot_) continue;
      const auto& triple = kg_.triples()[idx];
      const std::size_t mark = b.size();
      if (Unify(kg_, p, triple.key, b)) {
        premises_[pos] = &triple.key;
        Step(depth + 1, b);
        b.resize(mark);
      }
    }
  }

  void Emit(const Bindings& b) {
    bool unresolvable = false;
    const auto h = Fixed(kg_, rule_->head.head, b, unresolvable);
    const auto t = Fixed(kg_, rule_->head.tail, b, unresolvable);
    if (unresolvable || !h || !t) {
      warnings_->insert("rule " + rule_->name + ": head constant names no entity");
      return;
    }
    TripleKey key{*h, rule_->head.relation, *t};
    if (auto problem = kg_.CheckTriple(key)) {
      warnings_->insert("rule " + rule_->name + " dropped: " + *problem);
      return;
    }
    std::vector<TripleKey> premises;
    for (const auto* k : premises_) premises.push_back(*k);
    firings_->push_back({std::move(key), Provenance::Inferred(rule_->name, std::move(premises))});
  }

  const KnowledgeGraph& kg_;
  const std::vector<std::size_t>& delta_;
  std::size_t snapshot_;
  const Rule* rule_ = nullptr;
  std::vector<Firing>* firings_ = nullptr;
  std::set<std::string>* warnings_ = nullptr;
  std::vector<std::size_t> order_;
  std::vector<const TripleKey*> premises_;
};

}  // namespace

InferenceResult ApplyRulesFixpoint(const KnowledgeGraph& kg,
                                   const std::vector<Rule>& rules) {
  for (const auto& r : rules) ValidateRule(r, kg.schema());
  InferenceResult result{kg, 0, 0, {}};
  KnowledgeGraph& g = result.graph;
  std::set<std::string> warnings;

  const bool any_enabled =
      std::any_of(rules.begin(), rules.end(), [](const Rule& r) { return r.enabled; });
  std::vector<std::size_t> delta(g.triple_count());
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = i;

  while (any_enabled && !delta.empty()) {
    ++result.iterations;
    const std::size_t snapshot = g.triple_count();
    std::vector<Firing> firings;
    RoundEvaluator eval(g, delta, snapshot);
    for (const auto& r : rules) {
      if (r.enabled) eval.Run(r, firings, warnings);
    }
    std::vector<std::size_t> next;
    for (auto& f : firings) {
      if (g.AddTriple(f.key, false, {f.provenance}) == AddResult::kAdded) {
        next.push_back(g.triple_count() - 1);
        ++result.added;
      }
    }
    delta = std::move(next);
  }
  result.warnings.assign(warnings.begin(), warnings.end());
  return result;
}

namespace {

Derivation ExplainRec(const KnowledgeGraph& kg, const TripleKey& key,
                      std::set<TripleKey>& open) {
  Derivation d;
  d.key = key;
  const auto* t = kg.FindTriple(key);
  if (!t) {
    d.asserted = false;
    return d;
  }
  d.asserted = t->asserted;
  if (t->asserted) {
    for (const auto& p : t->provenance) {
      if (p.source != ProvenanceSource::kInferred) d.sources.push_back(p);
    }
    return d;
  }
  const auto first = std::find_if(t->provenance.begin(), t->provenance.end(),
                                  [](const Provenance& p) {
                                    return p.source == ProvenanceSource::kInferred;
                                  });
  if (first == t->provenance.end()) return d;
  d.rule = first->rule_name;
  open.insert(key);
  for (const auto& premise : first->premises) {
    if (open.contains(premise)) continue;
    d.premises.push_back(ExplainRec(kg, premise, open));
  }
  open.erase(key);
  return d;
}

void Format(const Derivation& d, std::size_t depth, std::string& out) {
  out.append(depth * 2, ' ');
  out += d.key.ToString();
  if (d.asserted) {
    out += " [asserted";
    for (const auto& p : d.sources) {
      out += "; " + std::string(ProvenanceSourceName(p.source)) + " " + p.doc_id +
             " sentence " + std::to_string(p.sentence_index);
    }
    out += "]\n";
  } else {
    out += " [inferred by " + (d.rule.empty() ? std::string("?") : d.rule) + "]\n";
  }
  for (const auto& p : d.premises) Format(p, depth + 1, out);
}

}  // namespace

Derivation Explain(const KnowledgeGraph& kg, const TripleKey& key) {
  if (!kg.FindTriple(key)) {
    throw Error(ErrorKind::kUnknownTriple, "no triple " + key.ToString(), std::nullopt,
                key.ToString());
  }
  std::set<TripleKey> open;
  return ExplainRec(kg, key, open);
}

std::string FormatDerivation(const Derivation& d) {
  std::string out;
  Format(d, 0, out);
  return out;
}

}  // namespace tinker
