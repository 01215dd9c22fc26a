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

#include "tinker/query.hpp"

#include <algorithm>
#include <optional>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

namespace {

struct Token {
  enum class Kind { kVar, kString, kWord, kOpen, kClose, kDot };
  Kind kind;
  std::string text;
};

bool IsVarChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::vector<Token> Tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (c == '{') {
      out.push_back({Token::Kind::kOpen, "{"});
      ++i;
    } else if (c == '}') {
      out.push_back({Token::Kind::kClose, "}"});
      ++i;
    } else if (c == '.') {
      out.push_back({Token::Kind::kDot, "."});
      ++i;
    } else if (c == '"') {
      const auto end = s.find('"', i + 1);
      if (end == std::string_view::npos) throw Error(ErrorKind::kSyntax, "unterminated label");
      out.push_back({Token::Kind::kString, std::string(s.substr(i + 1, end - i - 1))});
      i = end + 1;
    } else if (c == '?') {
      std::size_t j = i + 1;
      while (j < s.size() && IsVarChar(s[j])) ++j;
      const std::string name(s.substr(i + 1, j - i - 1));
      if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) {
        throw Error(ErrorKind::kSyntax, "bad variable name at offset " + std::to_string(i));
      }
      out.push_back({Token::Kind::kVar, name});
      i = j;
    } else {
      std::size_t j = i;
      while (j < s.size() && std::string_view(" \t\r\n{}\"").find(s[j]) == std::string_view::npos) ++j;
      auto word = s.substr(i, j - i);
      // A trailing '.' on a bare word separates patterns.
      std::size_t dots = 0;
      while (!word.empty() && word.back() == '.') {
        word.remove_suffix(1);
        ++dots;
      }
      if (!word.empty()) out.push_back({Token::Kind::kWord, std::string(word)});
      for (std::size_t k = 0; k < dots; ++k) out.push_back({Token::Kind::kDot, "."});
      i = j;
    }
  }
  return out;
}

QueryTerm TermFrom(const Token& t) {
  switch (t.kind) {
    case Token::Kind::kVar:
      return {QueryTerm::Kind::kVariable, t.text};
    case Token::Kind::kString:
      return {QueryTerm::Kind::kLabel, t.text};
    case Token::Kind::kWord:
      return {QueryTerm::Kind::kId, t.text};
    default:
      throw Error(ErrorKind::kSyntax, "expected a term, got '" + t.text + "'");
  }
}

void NoteVar(const QueryTerm& t, std::vector<std::string>& vars) {
  if (t.IsVariable() && std::find(vars.begin(), vars.end(), t.text) == vars.end()) {
    vars.push_back(t.text);
  }
}

}  // namespace

Query ParseQuery(std::string_view text) {
  const auto toks = Tokenize(text);
  std::size_t i = 0;
  Query q;
  bool explicit_select = false;
  bool star = false;
  bool braced = false;
  if (i < toks.size() && toks[i].kind == Token::Kind::kWord &&
      text::ToLowerAscii(toks[i].text) == "select") {
    explicit_select = true;
    ++i;
    if (i < toks.size() && toks[i].kind == Token::Kind::kWord && toks[i].text == "*") {
      star = true;
      ++i;
    }
    while (!star && i < toks.size() && toks[i].kind == Token::Kind::kVar) {
      q.select.push_back(toks[i++].text);
    }
    if (!star && q.select.empty()) throw Error(ErrorKind::kSyntax, "select lists no variables");
    if (i >= toks.size() || toks[i].kind != Token::Kind::kWord ||
        text::ToLowerAscii(toks[i].text) != "where") {
      throw Error(ErrorKind::kSyntax, "expected 'where'");
    }
    ++i;
  }
  if (i < toks.size() && toks[i].kind == Token::Kind::kOpen) {
    braced = true;
    ++i;
  } else if (explicit_select) {
    throw Error(ErrorKind::kSyntax, "expected '{'");
  }

  std::vector<Token> body;
  for (; i < toks.size(); ++i) {
    if (toks[i].kind == Token::Kind::kClose) {
      if (!braced) throw Error(ErrorKind::kSyntax, "unexpected '}'");
      braced = false;
      ++i;
      break;
    }
    if (toks[i].kind == Token::Kind::kOpen) throw Error(ErrorKind::kSyntax, "unexpected '{'");
    body.push_back(toks[i]);
  }
  if (braced) throw Error(ErrorKind::kSyntax, "missing '}'");
  if (i < toks.size()) throw Error(ErrorKind::kSyntax, "trailing input after '}'");

  std::vector<std::string> vars;
  std::vector<Token> current;
  auto flush = [&](bool allow_empty) {
    if (current.empty()) {
      if (allow_empty) return;
      throw Error(ErrorKind::kSyntax, "empty pattern between '.' separators");
    }
    if (current.size() != 3) {
      throw Error(ErrorKind::kSyntax, "a pattern needs exactly three terms");
    }
    QueryPattern p;
    p.head = TermFrom(current[0]);
    if (current[1].kind == Token::Kind::kWord && current[1].text == "a") {
      p.class_atom = true;
      p.relation = {QueryTerm::Kind::kId, "a"};
      if (current[2].kind != Token::Kind::kWord) {
        throw Error(ErrorKind::kSyntax, "class atom needs a class name");
      }
      p.tail = {QueryTerm::Kind::kId, current[2].text};
    } else {
      if (current[1].kind == Token::Kind::kVar) {
        p.relation = {QueryTerm::Kind::kVariable, current[1].text};
      } else if (current[1].kind == Token::Kind::kWord) {
        p.relation = {QueryTerm::Kind::kId, current[1].text};
      } else {
        throw Error(ErrorKind::kSyntax, "relation must be a property name or variable");
      }
      p.tail = TermFrom(current[2]);
    }
    NoteVar(p.head, vars);
    NoteVar(p.relation, vars);
    NoteVar(p.tail, vars);
    q.patterns.push_back(std::move(p));
    current.clear();
  };
  for (std::size_t k = 0; k < body.size(); ++k) {
    if (body[k].kind == Token::Kind::kDot) {
      flush(false);
    } else {
      current.push_back(body[k]);
    }
  }
  flush(true);
  if (q.patterns.empty()) throw Error(ErrorKind::kSyntax, "empty pattern block");
  if (q.select.empty()) {
    q.select = vars;
  } else {
    for (const auto& v : q.select) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
        throw Error(ErrorKind::kSyntax, "selected variable ?" + v + " not used in a pattern");
      }
    }
  }
  return q;
}

namespace {

// A pattern with its constants resolved to ids.
struct BoundPattern {
  const QueryPattern* src;
  std::optional<std::string> head;  // constant id
  std::optional<std::string> relation;
  std::optional<std::string> tail;
  bool unsatisfiable = false;
};

std::optional<std::string> ResolveTerm(const KnowledgeGraph& kg, const QueryTerm& t,
                                       const AliasTable& aliases, bool& unsatisfiable) {
  switch (t.kind) {
    case QueryTerm::Kind::kVariable:
      return std::nullopt;
    case QueryTerm::Kind::kId:
      if (!kg.FindEntity(t.text)) unsatisfiable = true;
      return t.text;
    case QueryTerm::Kind::kLabel:
      for (const auto& id : CandidateIds(t.text, aliases)) {
        if (kg.FindEntity(id)) return id;
      }
      unsatisfiable = true;
      return t.text;
  }
  return std::nullopt;
}

class Evaluator {
 public:
  Evaluator(const KnowledgeGraph& kg, std::vector<BoundPattern> patterns,
            bool include_inferred)
      : kg_(kg), patterns_(std::move(patterns)), include_inferred_(include_inferred) {}

  std::vector<BindingSet> Run() {
    Plan();
    BindingSet b;
    Step(0, b);
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    return std::move(rows_);
  }

 private:
  static bool Bound(const QueryTerm& t, const std::optional<std::string>& c,
                    const std::set<std::string>& vars) {
    return t.IsVariable() ? vars.contains(t.text) : c.has_value();
  }

  std::size_t Estimate(const BoundPattern& p) const {
    if (p.src->class_atom) return p.head ? 1 : kg_.entities().size();
    return kg_.Match(p.head, p.relation, p.tail).size();
  }

  // Static greedy order: most bound positions first, then the smallest
  // constant-only match count, then the written order.
  void Plan() {
    std::vector<std::size_t> estimate(patterns_.size());
    for (std::size_t i = 0; i < patterns_.size(); ++i) estimate[i] = Estimate(patterns_[i]);
    std::set<std::string> vars;
    std::vector<bool> used(patterns_.size(), false);
    for (std::size_t n = 0; n < patterns_.size(); ++n) {
      std::optional<std::size_t> best;
      int best_bound = -1;
      for (std::size_t i = 0; i < patterns_.size(); ++i) {
        if (used[i]) continue;
        const auto& p = patterns_[i];
        int bound = Bound(p.src->head, p.head, vars) + Bound(p.src->tail, p.tail, vars);
        if (!p.src->class_atom) bound += Bound(p.src->relation, p.relation, vars);
        else bound += 2;  // class atoms filter cheaply
        if (!best || bound > best_bound ||
            (bound == best_bound && estimate[i] < estimate[*best])) {
          best = i;
          best_bound = bound;
        }
      }
      used[*best] = true;
      order_.push_back(*best);
      const auto* src = patterns_[*best].src;
      for (const auto* t : {&src->head, &src->relation, &src->tail}) {
        if (t->IsVariable()) vars.insert(t->text);
      }
    }
  }

  static std::optional<std::string> Value(const QueryTerm& t,
                                          const std::optional<std::string>& c,
                                          const BindingSet& b) {
    if (!t.IsVariable()) return c;
    auto it = b.find(t.text);
    return it == b.end() ? std::nullopt : std::optional<std::string>(it->second);
  }

  static bool Bind(const QueryTerm& t, const std::string& value, BindingSet& b,
                   std::vector<std::string>& added) {
    if (!t.IsVariable()) return true;
    auto [it, inserted] = b.emplace(t.text, value);
    if (inserted) {
      added.push_back(t.text);
      return true;
    }
    return it->second == value;
  }

  void Step(std::size_t depth, BindingSet& b) {
    if (depth == order_.size()) {
      rows_.push_back(b);
      return;
    }
    const auto& p = patterns_[order_[depth]];
    const auto* src = p.src;
    auto recurse = [&](std::vector<std::pair<const QueryTerm*, std::string>> binds) {
      std::vector<std::string> added;
      bool ok = true;
      for (const auto& [term, value] : binds) {
        if (!Bind(*term, value, b, added)) {
          ok = false;
          break;
        }
      }
      if (ok) Step(depth + 1, b);
      for (const auto& v : added) b.erase(v);
    };

    const auto h = Value(src->head, p.head, b);
    if (src->class_atom) {
      const auto& cls = src->tail.text;
      if (h) {
        const auto* e = kg_.FindEntity(*h);
        if (e && kg_.schema().IsSubclass(e->class_name, cls)) Step(depth + 1, b);
        return;
      }
      for (const auto& [id, e] : kg_.entities()) {
        if (kg_.schema().IsSubclass(e.class_name, cls)) recurse({{&src->head, id}});
      }
      return;
    }
    const auto r = Value(src->relation, p.relation, b);
    const auto t = Value(src->tail, p.tail, b);
    if (r && !kg_.schema().HasProperty(*r)) return;
    for (std::size_t idx : kg_.Match(h, r, t)) {
      const auto& triple = kg_.triples()[idx];
      if (!include_inferred_ && !triple.asserted) continue;
      recurse({{&src->head, triple.key.head},
               {&src->relation, triple.key.relation},
               {&src->tail, triple.key.tail}});
    }
  }

  const KnowledgeGraph& kg_;
  std::vector<BoundPattern> patterns_;
  bool include_inferred_;
  std::vector<std::size_t> order_;
  std::vector<BindingSet> rows_;
};

}  // namespace

std::vector<BindingSet> Evaluate(const KnowledgeGraph& kg, const Query& query,
                                 bool include_inferred, const AliasTable& aliases) {
  std::vector<BoundPattern> bound;
  bool unsatisfiable = false;
  for (const auto& p : query.patterns) {
    BoundPattern bp{&p, {}, {}, {}, false};
    bp.head = ResolveTerm(kg, p.head, aliases, bp.unsatisfiable);
    if (p.class_atom) {
      if (!kg.schema().HasClass(p.tail.text)) {
        throw Error(ErrorKind::kUnknownClass, "undeclared class " + p.tail.text,
                    std::nullopt, p.tail.text);
      }
    } else {
      if (!p.relation.IsVariable()) {
        if (!kg.schema().HasProperty(p.relation.text)) {
          throw Error(ErrorKind::kUnknownProperty, "undeclared property " + p.relation.text,
                      std::nullopt, p.relation.text);
        }
        bp.relation = p.relation.text;
      }
      bp.tail = ResolveTerm(kg, p.tail, aliases, bp.unsatisfiable);
    }
    unsatisfiable = unsatisfiable || bp.unsatisfiable;
    bound.push_back(std::move(bp));
  }
  if (unsatisfiable) return {};
  return Evaluator(kg, std::move(bound), include_inferred).Run();
}

std::vector<std::vector<std::string>> Project(const std::vector<BindingSet>& rows,
                                              const std::vector<std::string>& select) {
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size());
  for (const auto& b : rows) {
    std::vector<std::string> row;
    for (const auto& v : select) {
      auto it = b.find(v);
      row.push_back(it == b.end() ? std::string() : it->second);
    }
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<std::string> CqMissingInfo(const KnowledgeGraph& kg, std::string_view entity_id,
                                    bool include_inferred) {
  const auto& e = kg.GetEntity(entity_id);
  auto expected = kg.schema().ExpectedProperties(e.class_name);
  if (!expected) {
    throw Error(ErrorKind::kNoExpectationDefined,
                "no expected properties for class " + e.class_name, std::nullopt,
                e.class_name);
  }
  for (std::size_t idx : kg.Match(entity_id, std::nullopt, std::nullopt)) {
    const auto& t = kg.triples()[idx];
    if (include_inferred || t.asserted) expected->erase(t.key.relation);
  }
  return *expected;
}

std::vector<SharedFeatures> CqSharedFeatures(const KnowledgeGraph& kg, std::size_t k,
                                             bool include_inferred) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
  using Feature = std::pair<std::string, std::string>;
  std::map<std::string, std::set<Feature>> features;
  for (const auto& t : kg.triples()) {
    if (include_inferred || t.asserted) {
      features[t.key.head].emplace(t.key.relation, t.key.tail);
    }
  }
  std::vector<SharedFeatures> out;
  for (auto a = features.begin(); a != features.end(); ++a) {
    const auto& ca = kg.GetEntity(a->first).class_name;
    for (auto b = std::next(a); b != features.end(); ++b) {
      if (kg.GetEntity(b->first).class_name != ca) continue;
      SharedFeatures sf{a->first, b->first, {}};
      std::set_intersection(a->second.begin(), a->second.end(), b->second.begin(),
                            b->second.end(), std::inserter(sf.shared, sf.shared.end()));
      if (sf.shared.size() >= k) out.push_back(std::move(sf));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.shared.size() != y.shared.size()) return x.shared.size() > y.shared.size();
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return out;
}

const std::set<std::string, std::less<>>& ImpactRelations() {
  static const std::set<std::string, std::less<>> r{"targets", "impacts", "exploits",
                                                    "hasVulnerability"};
  return r;
}

KnowledgeGraph CqImpact(const KnowledgeGraph& kg, std::string_view entity_id,
                        bool include_inferred) {
  const auto& root = kg.GetEntity(entity_id);
  const auto& schema = kg.schema();
  auto usable = [&](const Triple& t) {
    return (include_inferred || t.asserted) && ImpactRelations().contains(t.key.relation);
  };
  auto attaches = [&](const std::string& id) {
    const auto& cls = kg.GetEntity(id).class_name;
    return (schema.HasClass("Organization") && schema.IsSubclass(cls, "Organization")) ||
           (schema.HasClass("Location") && schema.IsSubclass(cls, "Location"));
  };
  std::set<std::string> level1;
  std::set<TripleKey> edges;
  for (std::size_t idx : kg.Match(root.id, std::nullopt, std::nullopt)) {
    const auto& t = kg.triples()[idx];
    if (usable(t)) {
      level1.insert(t.key.tail);
      edges.insert(t.key);
    }
  }
  std::set<std::string> ids = level1;
  ids.insert(root.id);
  for (const auto& n : level1) {
    for (std::size_t idx : kg.Match(n, std::nullopt, std::nullopt)) {
      const auto& t = kg.triples()[idx];
      if (usable(t) && attaches(t.key.tail)) {
        ids.insert(t.key.tail);
        edges.insert(t.key);
      }
    }
  }
  return Subgraph(kg, ids, [&](const Triple& t) { return edges.contains(t.key); });
}

}  // namespace tinker
