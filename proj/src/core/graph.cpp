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

#include "tinker/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

// ---------------------------------------------------------------------------
// Canonicalization

bool KeepsCase(std::string_view class_name) {
  return class_name == "Indicator" || class_name == "Vulnerability";
}

namespace {

bool IsCurlyQuote(char32_t c) {
  return c == 0x201C || c == 0x201D || c == 0x2018 || c == 0x2019 ||
         c == 0x201E || c == 0x201A;
}

char32_t ClosingFor(char32_t open) {
  switch (open) {
    case U'(': return U')';
    case U'[': return U']';
    case U'{': return U'}';
    case U'<': return U'>';
    case U'"': return U'"';
    case U'\'': return U'\'';
    case 0x00AB: return 0x00BB;
    default: return 0;
  }
}

bool IsOpenBracket(char32_t c) {
  return c == U'(' || c == U'[' || c == U'{' || c == U'<';
}
bool IsCloseBracket(char32_t c) {
  return c == U')' || c == U']' || c == U'}' || c == U'>';
}

// Depth of bracket nesting never drops to zero before the last character.
bool EnclosesAll(const std::u32string& s) {
  const char32_t open = s.front();
  const char32_t close = ClosingFor(open);
  if (close == 0 || s.size() < 2 || s.back() != close) return false;
  if (open == close) return true;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == open) ++depth;
    if (s[i] == close) --depth;
    if (depth == 0 && i + 1 < s.size()) return false;
  }
  return depth == 0;
}

std::u32string TrimSpace(std::u32string s) {
  std::size_t b = 0, e = s.size();
  while (b < e && text::IsSpace(s[b])) ++b;
  while (e > b && text::IsSpace(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string FoldKey(std::string_view cleaned, std::string_view class_name) {
  if (KeepsCase(class_name)) return std::string(cleaned);
  // Case-fold and collapse internal whitespace runs.
  std::string out;
  bool space = false;
  for (char c : cleaned) {
    if (c == ' ' || c == '\t' || c == '\n') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  }
  return out;
}

}  // namespace

std::string CleanSurface(std::string_view surface) {
  std::u32string s;
  for (char32_t c : text::Decode(surface)) {
    if (!IsCurlyQuote(c)) s.push_back(c == U'\n' || c == U'\t' ? U' ' : c);
  }
  s = TrimSpace(std::move(s));
  while (!s.empty()) {
    if (EnclosesAll(s)) {
      s = TrimSpace(s.substr(1, s.size() - 2));
      continue;
    }
    const auto opens = [&](char32_t c) { return std::count(s.begin(), s.end(), c); };
    if (IsOpenBracket(s.front()) &&
        opens(s.front()) > opens(ClosingFor(s.front()))) {
      s = TrimSpace(s.substr(1));
      continue;
    }
    if (IsCloseBracket(s.back())) {
      char32_t open = 0;
      for (char32_t o : {U'(', U'[', U'{', U'<'}) {
        if (ClosingFor(o) == s.back()) open = o;
      }
      if (opens(s.back()) > opens(open)) {
        s = TrimSpace(s.substr(0, s.size() - 1));
        continue;
      }
    }
    if (s.front() == U'"' || s.front() == U'\'') {
      s = TrimSpace(s.substr(1));
      continue;
    }
    if (s.back() == U'"' || (s.back() == U'\'' && s.size() > 1)) {
      s = TrimSpace(s.substr(0, s.size() - 1));
      continue;
    }
    break;
  }
  return text::Encode(s);
}

AliasTable AliasTable::Load(std::string_view tsv) {
  AliasTable table;
  std::size_t line_no = 0;
  for (auto line : text::Split(tsv, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::TrimAscii(line).empty() || line.front() == '#') continue;
    auto cols = text::Split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3 || text::TrimAscii(cols[0]).empty() ||
        text::TrimAscii(cols[1]).empty()) {
      throw Error(ErrorKind::kSyntax,
                  "alias line must be 'surface<TAB>canonical label<TAB>class'",
                  line_no);
    }
    table.Add(cols[0], CleanSurface(cols[1]),
              cols.size() == 3 ? std::string(text::TrimAscii(cols[2])) : "");
  }
  // Every chain must terminate.
  for (const auto& [key, entries] : table.entries_) {
    for (const auto& e : entries) {
      std::string cur = e.canonical;
      for (std::size_t steps = 0;; ++steps) {
        auto next = table.LookupOnce(cur, e.class_name);
        if (!next || *next == cur) break;
        if (steps > table.entries_.size()) {
          throw Error(ErrorKind::kValidation, "alias cycle through '" + cur + "'",
                      std::nullopt, cur);
        }
        cur = *next;
      }
    }
  }
  return table;
}

void AliasTable::Add(std::string_view surface, std::string canonical,
                     std::string class_name) {
  const auto key = FoldKey(CleanSurface(surface), class_name);
  entries_[key].push_back(Entry{std::move(canonical), std::move(class_name)});
}

std::set<std::string> AliasTable::classes() const {
  std::set<std::string> out;
  for (const auto& [key, entries] : entries_) {
    for (const auto& e : entries) {
      if (!e.class_name.empty()) out.insert(e.class_name);
    }
  }
  return out;
}

std::optional<std::string> AliasTable::LookupOnce(std::string_view cleaned,
                                                  std::string_view class_name) const {
  // Class-specific entries win over class-agnostic ones.
  if (auto it = entries_.find(FoldKey(cleaned, class_name)); it != entries_.end()) {
    for (const auto& e : it->second) {
      if (e.class_name == class_name) return e.canonical;
    }
  }
  if (auto it = entries_.find(FoldKey(cleaned, "")); it != entries_.end()) {
    for (const auto& e : it->second) {
      if (e.class_name.empty()) return e.canonical;
    }
  }
  return std::nullopt;
}

std::optional<std::string> AliasTable::Lookup(std::string_view cleaned,
                                              std::string_view class_name) const {
  auto hit = LookupOnce(cleaned, class_name);
  if (!hit) return std::nullopt;
  for (std::size_t steps = 0; steps < 64; ++steps) {
    auto next = LookupOnce(*hit, class_name);
    if (!next || *next == *hit) break;
    hit = std::move(next);
  }
  return hit;
}

CanonicalLabel CanonicalizeLabel(std::string_view surface,
                                 std::string_view class_name,
                                 const AliasTable& aliases) {
  std::string cleaned = CleanSurface(surface);
  if (cleaned.empty()) {
    throw Error(ErrorKind::kEmptyLabel,
                "label '" + std::string(surface) + "' is empty after cleaning");
  }
  std::string label = aliases.Lookup(cleaned, class_name).value_or(cleaned);
  std::string id = KeepsCase(class_name) ? text::IocSlug(label) : text::Slug(label);
  if (id.empty()) {
    throw Error(ErrorKind::kEmptyLabel,
                "label '" + label + "' has no identifier characters");
  }
  return {std::move(id), std::move(label)};
}

std::vector<std::string> CandidateIds(std::string_view surface,
                                      const AliasTable& aliases) {
  std::vector<std::string> classes{""};
  for (const auto& c : aliases.classes()) classes.push_back(c);
  classes.push_back("Indicator");
  std::vector<std::string> ids;
  for (const auto& cls : classes) {
    try {
      auto id = CanonicalizeLabel(surface, cls, aliases).entity_id;
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
    } catch (const Error&) {
    }
  }
  return ids;
}

// ---------------------------------------------------------------------------
// Triples and provenance

std::string TripleKey::ToString() const {
  return "⟨" + head + ", " + relation + ", " + tail + "⟩";
}

std::string_view ProvenanceSourceName(ProvenanceSource source) {
  switch (source) {
    case ProvenanceSource::kManual: return "manual";
    case ProvenanceSource::kAutoIoc: return "auto-ioc";
    case ProvenanceSource::kInferred: return "inferred";
  }
  return "manual";
}

std::optional<ProvenanceSource> ParseProvenanceSource(std::string_view name) {
  if (name == "manual") return ProvenanceSource::kManual;
  if (name == "auto-ioc") return ProvenanceSource::kAutoIoc;
  if (name == "inferred") return ProvenanceSource::kInferred;
  return std::nullopt;
}

Provenance Provenance::Inferred(std::string rule, std::vector<TripleKey> premises) {
  Provenance p;
  p.source = ProvenanceSource::kInferred;
  p.rule_name = std::move(rule);
  p.premises = std::move(premises);
  return p;
}

// ---------------------------------------------------------------------------
// KnowledgeGraph

KnowledgeGraph::KnowledgeGraph(SchemaPtr schema, std::string base_namespace)
    : schema_(std::move(schema)), namespace_(std::move(base_namespace)) {
  if (!schema_) throw Error(ErrorKind::kInvalidArgument, "graph needs a schema");
  std::uint32_t n = 0;
  for (const auto& [name, def] : schema_->properties()) property_terms_[name] = n++;
}

std::string KnowledgeGraph::EntityUri(std::string_view id) const {
  return namespace_ + "entity/" + text::PercentEncode(id);
}

std::string KnowledgeGraph::PropertyUri(std::string_view name) const {
  return namespace_ + "prop/" + text::PercentEncode(name);
}

std::string KnowledgeGraph::ClassUri(std::string_view name) const {
  return namespace_ + "class/" + text::PercentEncode(name);
}

const Entity& KnowledgeGraph::AddEntity(const std::string& id,
                                        const std::string& class_name,
                                        const std::string& label,
                                        const std::set<std::string>& aliases) {
  schema_->Class(class_name);
  if (id.empty()) throw Error(ErrorKind::kEmptyLabel, "empty entity id");
  auto it = entities_.find(id);
  if (it == entities_.end()) {
    Entity e{id, class_name, label, aliases, EntityUri(id)};
    e.aliases.insert(label);
    InternEntity(id);
    return entities_.emplace(id, std::move(e)).first->second;
  }
  Entity& e = it->second;
  if (e.class_name != class_name) {
    if (schema_->IsSubclass(class_name, e.class_name)) {
      e.class_name = class_name;
    } else if (!schema_->IsSubclass(e.class_name, class_name)) {
      throw Error(ErrorKind::kValidation,
                  "entity " + id + " annotated as both " + e.class_name + " and " +
                      class_name,
                  std::nullopt, id);
    }
  }
  e.aliases.insert(aliases.begin(), aliases.end());
  e.aliases.insert(label);
  if (label < e.label) e.label = label;
  return e;
}

const Entity* KnowledgeGraph::FindEntity(std::string_view id) const {
  auto it = entities_.find(id);
  return it == entities_.end() ? nullptr : &it->second;
}

const Entity& KnowledgeGraph::GetEntity(std::string_view id) const {
  const auto* e = FindEntity(id);
  if (!e) {
    throw Error(ErrorKind::kUnknownEntity, "unknown entity " + std::string(id),
                std::nullopt, std::string(id));
  }
  return *e;
}

std::uint32_t KnowledgeGraph::InternEntity(const std::string& id) {
  auto [it, inserted] =
      entity_terms_.emplace(id, static_cast<std::uint32_t>(entity_terms_.size()));
  return it->second;
}

std::optional<std::uint32_t> KnowledgeGraph::EntityTerm(std::string_view id) const {
  auto it = entity_terms_.find(std::string(id));
  if (it == entity_terms_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> KnowledgeGraph::PropertyTerm(std::string_view name) const {
  auto it = property_terms_.find(name);
  if (it == property_terms_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> KnowledgeGraph::CheckTriple(const TripleKey& key) const {
  const auto* head = FindEntity(key.head);
  const auto* tail = FindEntity(key.tail);
  if (!head) return "unknown head entity " + key.head;
  if (!tail) return "unknown tail entity " + key.tail;
  if (!schema_->HasProperty(key.relation)) return "unknown property " + key.relation;
  if (key.head == key.tail) {
    return key.relation + " is not reflexive: " + key.ToString();
  }
  if (!schema_->CheckDomainRange(key.relation, head->class_name, tail->class_name)) {
    return key.relation + " does not accept " + head->class_name + " -> " +
           tail->class_name + " in " + key.ToString();
  }
  return std::nullopt;
}

AddResult KnowledgeGraph::AddTriple(const TripleKey& key, bool asserted,
                                    const std::vector<Provenance>& provenance) {
  if (auto it = key_index_.find(key); it != key_index_.end()) {
    Triple& t = triples_[it->second];
    AddResult result = AddResult::kUnchanged;
    if (asserted && !t.asserted) {
      t.asserted = true;
      result = AddResult::kProvenanceAppended;
    }
    for (const auto& p : provenance) {
      if (std::find(t.provenance.begin(), t.provenance.end(), p) == t.provenance.end()) {
        t.provenance.push_back(p);
        result = AddResult::kProvenanceAppended;
      }
    }
    return result;
  }
  if (!FindEntity(key.head)) GetEntity(key.head);
  if (!FindEntity(key.tail)) GetEntity(key.tail);
  schema_->Property(key.relation);
  if (auto problem = CheckTriple(key)) {
    throw Error(ErrorKind::kDomainRangeViolation, *problem, std::nullopt,
                key.ToString());
  }

  Triple t{key, asserted, {}};
  for (const auto& p : provenance) {
    if (std::find(t.provenance.begin(), t.provenance.end(), p) == t.provenance.end()) {
      t.provenance.push_back(p);
    }
  }
  const auto index = static_cast<std::uint32_t>(triples_.size());
  const auto s = *EntityTerm(key.head);
  const auto p = *PropertyTerm(key.relation);
  const auto o = *EntityTerm(key.tail);
  spo_.insert({s, p, o, index});
  pos_.insert({p, o, s, index});
  osp_.insert({o, s, p, index});
  key_index_.emplace(key, triples_.size());
  triples_.push_back(std::move(t));
  return AddResult::kAdded;
}

const Triple* KnowledgeGraph::FindTriple(const TripleKey& key) const {
  auto it = key_index_.find(key);
  return it == key_index_.end() ? nullptr : &triples_[it->second];
}

std::vector<const Triple*> KnowledgeGraph::SortedTriples() const {
  std::vector<const Triple*> out;
  out.reserve(triples_.size());
  for (const auto& [key, index] : key_index_) out.push_back(&triples_[index]);
  return out;
}

std::vector<std::size_t> KnowledgeGraph::Match(
    std::optional<std::string_view> head, std::optional<std::string_view> relation,
    std::optional<std::string_view> tail) const {
  std::optional<std::uint32_t> s, p, o;
  if (head && !(s = EntityTerm(*head))) return {};
  if (relation && !(p = PropertyTerm(*relation))) return {};
  if (tail && !(o = EntityTerm(*tail))) return {};

  std::vector<std::size_t> out;
  // Scan `index` over the rows whose leading components equal `prefix`.
  auto scan = [&](const std::set<Row>& index, std::initializer_list<std::uint32_t> prefix,
                  auto&& accept) {
    Row lo{0, 0, 0, 0};
    std::size_t i = 0;
    for (auto v : prefix) lo[i++] = v;
    for (auto it = index.lower_bound(lo); it != index.end(); ++it) {
      bool same = true;
      for (std::size_t k = 0; k < prefix.size(); ++k) {
        if ((*it)[k] != lo[k]) same = false;
      }
      if (!same) break;
      if (accept(*it)) out.push_back((*it)[3]);
    }
  };
  auto all = [](const Row&) { return true; };

  if (s && p && o) {
    scan(spo_, {*s, *p, *o}, all);
  } else if (s && p) {
    scan(spo_, {*s, *p}, all);
  } else if (s && o) {
    scan(osp_, {*o, *s}, all);
  } else if (p && o) {
    scan(pos_, {*p, *o}, all);
  } else if (s) {
    scan(spo_, {*s}, all);
  } else if (p) {
    scan(pos_, {*p}, all);
  } else if (o) {
    scan(osp_, {*o}, all);
  } else {
    for (std::size_t i = 0; i < triples_.size(); ++i) out.push_back(i);
  }
  return out;
}

bool KnowledgeGraph::IndexesConsistent() const {
  if (spo_.size() != triples_.size() || pos_.size() != triples_.size() ||
      osp_.size() != triples_.size()) {
    return false;
  }
  std::set<Row> from_pos, from_osp;
  for (const auto& r : pos_) from_pos.insert({r[2], r[0], r[1], r[3]});
  for (const auto& r : osp_) from_osp.insert({r[1], r[2], r[0], r[3]});
  if (from_pos != spo_ || from_osp != spo_) return false;
  for (const auto& r : spo_) {
    const auto& key = triples_.at(r[3]).key;
    if (EntityTerm(key.head) != r[0] || PropertyTerm(key.relation) != r[1] ||
        EntityTerm(key.tail) != r[2]) {
      return false;
    }
  }
  return true;
}

bool KnowledgeGraph::SameContent(const KnowledgeGraph& other) const {
  if (entities_ != other.entities_ || key_index_.size() != other.key_index_.size()) {
    return false;
  }
  for (const auto& [key, index] : key_index_) {
    const auto* t = other.FindTriple(key);
    if (!t || t->asserted != triples_[index].asserted) return false;
  }
  return true;
}

bool KnowledgeGraph::operator==(const KnowledgeGraph& other) const {
  if (!SameContent(other)) return false;
  for (const auto& t : triples_) {
    const auto* u = other.FindTriple(t.key);
    std::set<Provenance> a(t.provenance.begin(), t.provenance.end());
    std::set<Provenance> b(u->provenance.begin(), u->provenance.end());
    if (a != b) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Construction

KnowledgeGraph BuildGraph(const std::vector<Document>& docs,
                          const std::vector<AnnotationSet>& annotations,
                          SchemaPtr schema, const AliasTable& aliases,
                          const BuildOptions& options) {
  std::map<std::string, const Document*> doc_by_id;
  for (const auto& d : docs) doc_by_id[d.doc_id()] = &d;
  std::vector<const AnnotationSet*> sets;
  for (const auto& s : annotations) sets.push_back(&s);
  std::stable_sort(sets.begin(), sets.end(),
                   [](const AnnotationSet* a, const AnnotationSet* b) {
                     return a->doc_id < b->doc_id;
                   });

  KnowledgeGraph kg(schema, options.base_namespace);
  std::vector<std::string> violations;

  // Pass 1: entities, so every relation sees final (merged) classes.
  std::vector<std::map<std::string, std::string, std::less<>>> span_to_entity(sets.size());
  for (std::size_t si = 0; si < sets.size(); ++si) {
    for (const auto& span : sets[si]->entities) {
      if (!schema->HasClass(span.class_name)) {
        violations.push_back(sets[si]->doc_id + " " + span.ann_id + ": unknown class " +
                             span.class_name);
        continue;
      }
      CanonicalLabel canon;
      try {
        canon = CanonicalizeLabel(span.surface, span.class_name, aliases);
        kg.AddEntity(canon.entity_id, span.class_name, canon.label,
                     {CleanSurface(span.surface)});
      } catch (const Error& e) {
        violations.push_back(sets[si]->doc_id + " " + span.ann_id + ": " + e.what());
        continue;
      }
      span_to_entity[si][span.ann_id] = canon.entity_id;
    }
  }

  // Pass 2: relations.
  for (std::size_t si = 0; si < sets.size(); ++si) {
    const auto& set = *sets[si];
    std::vector<Sentence> sentences;
    if (auto it = doc_by_id.find(set.doc_id); it != doc_by_id.end()) {
      sentences = SplitSentences(*it->second);
    }
    for (const auto& rel : set.relations) {
      const auto* head_span = set.FindEntity(rel.arg1);
      const auto* tail_span = set.FindEntity(rel.arg2);
      auto head = span_to_entity[si].find(rel.arg1);
      auto tail = span_to_entity[si].find(rel.arg2);
      if (!head_span || !tail_span || head == span_to_entity[si].end() ||
          tail == span_to_entity[si].end()) {
        violations.push_back(set.doc_id + " " + rel.ann_id +
                             ": argument does not resolve to an entity");
        continue;
      }
      TripleKey key{head->second, rel.property_name, tail->second};
      if (!schema->HasProperty(rel.property_name)) {
        violations.push_back(set.doc_id + " " + rel.ann_id + ": unknown property " +
                             rel.property_name);
        continue;
      }
      if (auto problem = kg.CheckTriple(key)) {
        violations.push_back(set.doc_id + " " + rel.ann_id + ": " + *problem);
        continue;
      }
      Provenance prov;
      prov.source = (head_span->IsAuto() || tail_span->IsAuto())
                        ? ProvenanceSource::kAutoIoc
                        : ProvenanceSource::kManual;
      prov.doc_id = set.doc_id;
      prov.head_span = head_span->Extent();
      prov.tail_span = tail_span->Extent();
      prov.sentence_index =
          sentences.empty() ? 0 : SentenceIndexAt(sentences, prov.head_span.first);
      kg.AddTriple(key, true, {prov});
    }
  }

  if (!violations.empty()) {
    std::string message = std::to_string(violations.size()) + " violation(s):";
    for (const auto& v : violations) message += "\n  " + v;
    throw Error(ErrorKind::kDomainRangeViolation, message);
  }
  return kg;
}

KnowledgeGraph MergeGraphs(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (!(a.schema() == b.schema())) {
    throw Error(ErrorKind::kSchemaMismatch, "cannot merge graphs with different schemas");
  }
  if (a.base_namespace() != b.base_namespace()) {
    throw Error(ErrorKind::kSchemaMismatch,
                "cannot merge graphs with namespaces " + a.base_namespace() + " and " +
                    b.base_namespace());
  }
  KnowledgeGraph out = a;
  for (const auto& [id, e] : b.entities()) {
    out.AddEntity(e.id, e.class_name, e.label, e.aliases);
  }
  for (const auto& t : b.triples()) out.AddTriple(t.key, t.asserted, t.provenance);
  return out;
}

KnowledgeGraph Neighborhood(const KnowledgeGraph& kg, std::string_view entity_id,
                            std::size_t depth) {
  kg.GetEntity(entity_id);
  std::set<std::string> seen{std::string(entity_id)};
  std::deque<std::pair<std::string, std::size_t>> queue{{std::string(entity_id), 0}};
  while (!queue.empty()) {
    auto [id, d] = queue.front();
    queue.pop_front();
    if (d == depth) continue;
    auto visit = [&](const std::string& next) {
      if (seen.insert(next).second) queue.emplace_back(next, d + 1);
    };
    for (auto i : kg.Match(id, std::nullopt, std::nullopt)) visit(kg.triples()[i].key.tail);
    for (auto i : kg.Match(std::nullopt, std::nullopt, id)) visit(kg.triples()[i].key.head);
  }
  return Subgraph(kg, seen, [](const Triple&) { return true; });
}

}  // namespace tinker
