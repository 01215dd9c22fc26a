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

#include "tinker/rdf_io.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include <nlohmann/json.hpp>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

namespace {

using json = nlohmann::ordered_json;

std::string Iri(std::string_view uri) { return "<" + std::string(uri) + ">"; }

bool IsCanonicalId(std::string_view id) {
  return !id.empty() && (text::Slug(id) == id || text::IocSlug(id) == id);
}

// Resolves URIs under the graph namespace.
class UriResolver {
 public:
  explicit UriResolver(std::string ns) : ns_(std::move(ns)) {}

  std::string Entity(std::string_view uri, std::size_t line) const {
    auto id = text::PercentDecode(Local(uri, "entity/", line));
    if (!IsCanonicalId(id)) {
      throw Error(ErrorKind::kSyntax, "'" + id + "' is not a canonical entity id",
                  line);
    }
    return id;
  }
  std::string Property(std::string_view uri, std::size_t line) const {
    return text::PercentDecode(Local(uri, "prop/", line));
  }
  std::string Class(std::string_view uri, std::size_t line) const {
    return text::PercentDecode(Local(uri, "class/", line));
  }

 private:
  std::string_view Local(std::string_view uri, std::string_view kind,
                         std::size_t line) const {
    const std::string prefix = ns_ + std::string(kind);
    if (!uri.starts_with(prefix) || uri.size() == prefix.size()) {
      throw Error(ErrorKind::kForeignNamespace,
                  "URI <" + std::string(uri) + "> is not under <" + prefix + ">",
                  line);
    }
    return uri.substr(prefix.size());
  }

  std::string ns_;
};

// Reads `<iri>` at `pos`, advancing past it.
std::string_view ReadIri(std::string_view line, std::size_t& pos, std::size_t line_no) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size() || line[pos] != '<') {
    throw Error(ErrorKind::kSyntax, "expected '<' starting an IRI", line_no);
  }
  const auto close = line.find('>', pos + 1);
  if (close == std::string_view::npos) {
    throw Error(ErrorKind::kSyntax, "unterminated IRI", line_no);
  }
  const auto iri = line.substr(pos + 1, close - pos - 1);
  for (char c : iri) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      throw Error(ErrorKind::kSyntax, "illegal character in IRI", line_no);
    }
  }
  if (iri.empty()) throw Error(ErrorKind::kSyntax, "empty IRI", line_no);
  pos = close + 1;
  return iri;
}

struct ParsedLine {
  std::string_view s, p, o;
  std::size_t line;
};

json SpanJson(const Span& s) { return json::array({s.first, s.second}); }

Span SpanFrom(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::kSyntax, "bad span");
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

std::string TurtleLocal(std::string_view id) {
  const bool safe = std::all_of(id.begin(), id.end(), [](char c) {
    return text::IsAsciiAlnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.';
  });
  if (!safe || id.empty() || id.front() == '-' || id.front() == '.' ||
      id.back() == '.') {
    return {};
  }
  return std::string(id);
}

}  // namespace

std::string SerializeNTriples(const KnowledgeGraph& kg) {
  std::vector<std::string> lines;
  lines.reserve(kg.triple_count() + kg.entities().size());
  const std::string type = Iri(kRdfType);
  for (const auto& [id, e] : kg.entities()) {
    lines.push_back(Iri(e.uri) + ' ' + type + ' ' + Iri(kg.ClassUri(e.class_name)) +
                    " .");
  }
  for (const auto& t : kg.triples()) {
    lines.push_back(Iri(kg.EntityUri(t.key.head)) + ' ' +
                    Iri(kg.PropertyUri(t.key.relation)) + ' ' +
                    Iri(kg.EntityUri(t.key.tail)) + " .");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string SerializeProvenance(const KnowledgeGraph& kg) {
  std::string out;
  for (const auto* t : kg.SortedTriples()) {
    for (const auto& p : t->provenance) {
      json j;
      j["head"] = kg.EntityUri(t->key.head);
      j["relation"] = kg.PropertyUri(t->key.relation);
      j["tail"] = kg.EntityUri(t->key.tail);
      j["source"] = ProvenanceSourceName(p.source);
      if (p.source == ProvenanceSource::kInferred) {
        j["rule"] = p.rule_name;
        json premises = json::array();
        for (const auto& k : p.premises) {
          premises.push_back({kg.EntityUri(k.head), kg.PropertyUri(k.relation),
                              kg.EntityUri(k.tail)});
        }
        j["premises"] = std::move(premises);
      } else {
        j["docId"] = p.doc_id;
        j["sentenceIndex"] = p.sentence_index;
        j["headSpan"] = SpanJson(p.head_span);
        j["tailSpan"] = SpanJson(p.tail_span);
      }
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

std::string SerializeEntities(const KnowledgeGraph& kg) {
  std::string out;
  for (const auto& [id, e] : kg.entities()) {
    json j;
    j["id"] = id;
    j["label"] = e.label;
    j["aliases"] = e.aliases;
    out += j.dump();
    out += '\n';
  }
  return out;
}

KnowledgeGraph ParseNTriples(std::string_view text, SchemaPtr schema,
                             std::string base_namespace,
                             const GraphSidecars* sidecars) {
  const UriResolver resolve(base_namespace);
  std::vector<ParsedLine> type_lines, relation_lines;
  std::size_t line_no = 0;
  for (auto raw : text::Split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto line = text::TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t pos = 0;
    ParsedLine parsed;
    parsed.s = ReadIri(line, pos, line_no);
    parsed.p = ReadIri(line, pos, line_no);
    parsed.o = ReadIri(line, pos, line_no);
    parsed.line = line_no;
    const auto rest = text::TrimAscii(line.substr(pos));
    if (rest != ".") {
      throw Error(ErrorKind::kSyntax, "statement must end with ' .'", line_no);
    }
    (parsed.p == kRdfType ? type_lines : relation_lines).push_back(parsed);
  }

  // Sidecar data, keyed by entity id / triple key.
  struct EntityExtras {
    std::string label;
    std::set<std::string> aliases;
  };
  std::map<std::string, EntityExtras> extras;
  std::map<TripleKey, std::vector<Provenance>> provenance;
  if (sidecars) {
    std::size_t n = 0;
    for (auto l : text::Split(sidecars->entities, '\n')) {
      ++n;
      if (text::TrimAscii(l).empty()) continue;
      try {
        const auto j = json::parse(l);
        extras[j.at("id").get<std::string>()] = {
            j.at("label").get<std::string>(),
            j.value("aliases", std::set<std::string>{})};
      } catch (const json::exception& e) {
        throw Error(ErrorKind::kSyntax, std::string("entities sidecar: ") + e.what(), n);
      }
    }
    n = 0;
    for (auto l : text::Split(sidecars->provenance, '\n')) {
      ++n;
      if (text::TrimAscii(l).empty()) continue;
      try {
        const auto j = json::parse(l);
        TripleKey key{resolve.Entity(j.at("head").get<std::string>(), n),
                      resolve.Property(j.at("relation").get<std::string>(), n),
                      resolve.Entity(j.at("tail").get<std::string>(), n)};
        const auto source = ParseProvenanceSource(j.at("source").get<std::string>());
        if (!source) throw Error(ErrorKind::kSyntax, "unknown provenance source", n);
        Provenance p;
        p.source = *source;
        if (p.source == ProvenanceSource::kInferred) {
          p.rule_name = j.at("rule").get<std::string>();
          for (const auto& k : j.at("premises")) {
            p.premises.push_back(TripleKey{resolve.Entity(k.at(0).get<std::string>(), n),
                                           resolve.Property(k.at(1).get<std::string>(), n),
                                           resolve.Entity(k.at(2).get<std::string>(), n)});
          }
        } else {
          p.doc_id = j.at("docId").get<std::string>();
          p.sentence_index = j.at("sentenceIndex").get<std::size_t>();
          p.head_span = SpanFrom(j.at("headSpan"));
          p.tail_span = SpanFrom(j.at("tailSpan"));
        }
        provenance[key].push_back(std::move(p));
      } catch (const json::exception& e) {
        throw Error(ErrorKind::kSyntax, std::string("provenance sidecar: ") + e.what(), n);
      }
    }
  }

  KnowledgeGraph kg(std::move(schema), base_namespace);
  for (const auto& l : type_lines) {
    const auto id = resolve.Entity(l.s, l.line);
    const auto cls = resolve.Class(l.o, l.line);
    if (!kg.schema().HasClass(cls)) {
      throw Error(ErrorKind::kUnknownClass, "undeclared class " + cls, l.line, cls);
    }
    std::string label = id;
    std::set<std::string> aliases;
    if (auto it = extras.find(id); it != extras.end()) {
      label = it->second.label;
      aliases = it->second.aliases;
    }
    try {
      kg.AddEntity(id, cls, label, aliases);
    } catch (const Error& e) {
      throw Error(e.kind(), e.what(), l.line, e.subject());
    }
  }
  for (const auto& l : relation_lines) {
    TripleKey key{resolve.Entity(l.s, l.line), resolve.Property(l.p, l.line),
                  resolve.Entity(l.o, l.line)};
    if (!kg.schema().HasProperty(key.relation)) {
      throw Error(ErrorKind::kUnknownProperty, "undeclared property " + key.relation,
                  l.line, key.relation);
    }
    for (const auto* id : {&key.head, &key.tail}) {
      if (!kg.FindEntity(*id)) {
        throw Error(ErrorKind::kValidation, "entity " + *id + " has no rdf:type line",
                    l.line, *id);
      }
    }
    if (auto problem = kg.CheckTriple(key)) {
      throw Error(ErrorKind::kDomainRangeViolation, *problem, l.line, key.ToString());
    }
    std::vector<Provenance> prov;
    bool asserted = true;
    if (auto it = provenance.find(key); it != provenance.end()) {
      prov = std::move(it->second);
      provenance.erase(it);
      asserted = std::any_of(prov.begin(), prov.end(), [](const Provenance& p) {
        return p.source != ProvenanceSource::kInferred;
      });
    }
    kg.AddTriple(key, asserted, prov);
  }
  if (!provenance.empty()) {
    throw Error(ErrorKind::kUnknownTriple,
                "provenance sidecar names a triple absent from the graph: " +
                    provenance.begin()->first.ToString());
  }
  return kg;
}

namespace {

std::string StripNt(std::string_view nt_path) {
  std::string base(nt_path);
  if (base.ends_with(".nt")) base.resize(base.size() - 3);
  return base;
}

}  // namespace

std::string ProvenancePath(std::string_view nt_path) {
  return StripNt(nt_path) + ".prov.jsonl";
}

std::string EntitiesPath(std::string_view nt_path) {
  return StripNt(nt_path) + ".entities.jsonl";
}

void SaveGraph(const KnowledgeGraph& kg, const std::string& nt_path) {
  text::WriteFile(nt_path, SerializeNTriples(kg));
  text::WriteFile(ProvenancePath(nt_path), SerializeProvenance(kg));
  text::WriteFile(EntitiesPath(nt_path), SerializeEntities(kg));
}

KnowledgeGraph LoadGraph(const std::string& nt_path, SchemaPtr schema,
                         std::string base_namespace) {
  const auto nt = text::ReadFile(nt_path);
  GraphSidecars sidecars;
  if (std::filesystem::exists(ProvenancePath(nt_path))) {
    sidecars.provenance = text::ReadFile(ProvenancePath(nt_path));
  }
  if (std::filesystem::exists(EntitiesPath(nt_path))) {
    sidecars.entities = text::ReadFile(EntitiesPath(nt_path));
  }
  return ParseNTriples(nt, std::move(schema), std::move(base_namespace), &sidecars);
}

std::string SerializeTurtle(const KnowledgeGraph& kg) {
  const auto& ns = kg.base_namespace();
  std::string out;
  out += "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";
  out += "@prefix c: <" + ns + "class/> .\n";
  out += "@prefix p: <" + ns + "prop/> .\n";
  out += "@prefix e: <" + ns + "entity/> .\n";

  auto entity = [&](const std::string& id) {
    auto local = TurtleLocal(id);
    return local.empty() ? Iri(kg.EntityUri(id)) : "e:" + local;
  };
  std::map<std::string, std::map<std::string, std::vector<std::string>>> by_subject;
  for (const auto* t : kg.SortedTriples()) {
    by_subject[t->key.head][t->key.relation].push_back(entity(t->key.tail));
  }
  for (const auto& [id, e] : kg.entities()) {
    out += '\n' + entity(id) + " a c:" + e.class_name;
    if (auto it = by_subject.find(id); it != by_subject.end()) {
      for (const auto& [rel, tails] : it->second) {
        out += " ;\n    p:" + rel + ' ';
        for (std::size_t i = 0; i < tails.size(); ++i) {
          if (i) out += ", ";
          out += tails[i];
        }
      }
    }
    out += " .\n";
  }
  return out;
}

std::string ExportDot(const KnowledgeGraph& kg) {
  std::string out = "digraph tinker {\n";
  for (const auto& [id, e] : kg.entities()) {
    out += "  \"" + text::DotEscape(id) + "\" [label=\"" + text::DotEscape(e.label) +
           "\", class=\"" + text::DotEscape(e.class_name) + "\"];\n";
  }
  for (const auto* t : kg.SortedTriples()) {
    out += "  \"" + text::DotEscape(t->key.head) + "\" -> \"" +
           text::DotEscape(t->key.tail) + "\" [label=\"" +
           text::DotEscape(t->key.relation) + "\"";
    if (!t->asserted) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

std::string ExportGraphml(const KnowledgeGraph& kg) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      "  <key id=\"class\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n"
      "  <key id=\"relation\" for=\"edge\" attr.name=\"relation\" attr.type=\"string\"/>\n"
      "  <key id=\"inferred\" for=\"edge\" attr.name=\"inferred\" attr.type=\"boolean\"/>\n"
      "  <graph id=\"tinker\" edgedefault=\"directed\">\n";
  for (const auto& [id, e] : kg.entities()) {
    out += "    <node id=\"" + text::XmlEscape(id) + "\"><data key=\"label\">" +
           text::XmlEscape(e.label) + "</data><data key=\"class\">" +
           text::XmlEscape(e.class_name) + "</data></node>\n";
  }
  std::size_t n = 0;
  for (const auto* t : kg.SortedTriples()) {
    out += "    <edge id=\"e" + std::to_string(n++) + "\" source=\"" +
           text::XmlEscape(t->key.head) + "\" target=\"" + text::XmlEscape(t->key.tail) +
           "\"><data key=\"relation\">" + text::XmlEscape(t->key.relation) +
           "</data><data key=\"inferred\">" + (t->asserted ? "false" : "true") +
           "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace tinker
