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

#include "tinker/standoff.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <regex>

#include <nlohmann/json.hpp>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

const EntitySpan* AnnotationSet::FindEntity(std::string_view ann_id) const {
  for (const auto& e : entities) {
    if (e.ann_id == ann_id) return &e;
  }
  return nullptr;
}

std::string Finding::ToJson() const {
  nlohmann::ordered_json j;
  j["docId"] = doc_id;
  j["annId"] = ann_id;
  j["kind"] = kind;
  j["message"] = message;
  return j.dump();
}

std::string FindingsToJsonl(const std::vector<Finding>& findings) {
  std::string out;
  for (const auto& f : findings) {
    out += f.ToJson();
    out += '\n';
  }
  return out;
}

bool ValidationReport::ok() const {
  return std::none_of(findings.begin(), findings.end(),
                      [](const Finding& f) { return !f.IsWarning(); });
}

namespace {

const std::regex kTId("T[0-9]+");
const std::regex kRId("R[0-9]+");
const std::regex kRBody(R"(([^ ]+) Arg1:(T[0-9]+) Arg2:(T[0-9]+))");

struct LineError {
  ErrorKind kind;
  std::string ann_id;
  std::string message;
};

bool ParseOffset(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view SkipKind(char c) {
  switch (c) {
    case 'A': return "attribute";
    case 'M': return "modification";
    case 'E': return "event";
    case 'N': return "normalization";
    case '#': return "note";
    default: return {};
  }
}

std::string LinePrefix(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

// Parses one T line; returns the span or throws LineError.
EntitySpan ParseEntityLine(std::string_view line, const Document& doc) {
  const auto tab1 = line.find('\t');
  const std::string ann_id(line.substr(0, tab1));
  if (tab1 == std::string_view::npos || !std::regex_match(ann_id, kTId)) {
    throw LineError{ErrorKind::kSyntax, ann_id, "malformed entity id"};
  }
  const auto tab2 = line.find('\t', tab1 + 1);
  if (tab2 == std::string_view::npos) {
    throw LineError{ErrorKind::kSyntax, ann_id, "entity line needs three tab-separated fields"};
  }
  const auto body = line.substr(tab1 + 1, tab2 - tab1 - 1);
  const auto recorded = line.substr(tab2 + 1);

  const auto space = body.find(' ');
  if (space == std::string_view::npos || space == 0) {
    throw LineError{ErrorKind::kSyntax, ann_id, "entity line needs '<Type> <start> <end>'"};
  }
  EntitySpan span;
  span.ann_id = ann_id;
  span.class_name = std::string(body.substr(0, space));
  span.doc_id = doc.doc_id();
  for (auto frag : text::Split(body.substr(space + 1), ';')) {
    auto parts = text::Split(frag, ' ');
    Span s;
    if (parts.size() != 2 || !ParseOffset(parts[0], s.first) ||
        !ParseOffset(parts[1], s.second)) {
      throw LineError{ErrorKind::kSyntax, ann_id,
                      "bad fragment '" + std::string(frag) + "'"};
    }
    if (s.first >= s.second || s.second > doc.length()) {
      throw LineError{ErrorKind::kSyntax, ann_id,
                      "fragment " + std::string(frag) + " outside document of length " +
                          std::to_string(doc.length())};
    }
    if (!span.fragments.empty() && s.first < span.fragments.back().second) {
      throw LineError{ErrorKind::kSyntax, ann_id, "fragments overlap or are unordered"};
    }
    span.fragments.push_back(s);
  }

  std::string expected;
  for (const auto& [b, e] : span.fragments) {
    if (!expected.empty()) expected += ' ';
    std::string slice = doc.Slice(b, e);
    std::replace(slice.begin(), slice.end(), '\n', ' ');
    expected += slice;
  }
  if (expected != recorded) {
    throw LineError{ErrorKind::kOffsetMismatch, ann_id,
                    "recorded text '" + std::string(recorded) +
                        "' differs from document text '" + expected + "'"};
  }
  span.surface = std::string(recorded);
  return span;
}

RelationAnn ParseRelationLine(std::string_view line, const Document& doc) {
  auto fields = text::Split(line, '\t');
  const std::string ann_id(fields[0]);
  if (!std::regex_match(ann_id, kRId)) {
    throw LineError{ErrorKind::kSyntax, ann_id, "malformed relation id"};
  }
  if (fields.size() < 2 || fields.size() > 3 ||
      (fields.size() == 3 && !text::TrimAscii(fields[2]).empty())) {
    throw LineError{ErrorKind::kSyntax, ann_id,
                    "relation line must be '<id>\\t<Type> Arg1:T<n> Arg2:T<m>'"};
  }
  std::cmatch m;
  const auto body = text::TrimAscii(fields[1]);
  if (!std::regex_match(body.data(), body.data() + body.size(), m, kRBody)) {
    throw LineError{ErrorKind::kSyntax, ann_id,
                    "relation body must be '<Type> Arg1:T<n> Arg2:T<m>'"};
  }
  RelationAnn rel{ann_id, m[1].str(), m[2].str(), m[3].str(), doc.doc_id(), 0};
  if (rel.arg1 == rel.arg2) {
    throw LineError{ErrorKind::kSyntax, ann_id, "relation arguments must differ"};
  }
  return rel;
}

}  // namespace

StandoffParse ParseStandoffCollect(std::string_view ann_text, const Document& doc) {
  StandoffParse out;
  out.set.doc_id = doc.doc_id();
  auto record = [&](std::size_t line_no, const LineError& err) {
    out.errors.push_back(Finding{doc.doc_id(), err.ann_id,
                                 std::string(ErrorKindName(err.kind)),
                                 LinePrefix(line_no) + err.message, line_no});
  };

  std::vector<std::pair<std::size_t, std::string_view>> relation_lines;
  std::map<std::string, std::size_t, std::less<>> seen_ids;
  std::size_t line_no = 0;
  for (auto line : text::Split(ann_text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::TrimAscii(line).empty()) continue;
    const char lead = line.front();
    if (lead == 'T') {
      try {
        auto span = ParseEntityLine(line, doc);
        span.line = line_no;
        if (seen_ids.contains(span.ann_id)) {
          throw LineError{ErrorKind::kSyntax, span.ann_id, "duplicate annotation id"};
        }
        seen_ids.emplace(span.ann_id, line_no);
        out.set.entities.push_back(std::move(span));
      } catch (const LineError& err) {
        record(line_no, err);
      }
    } else if (lead == 'R') {
      relation_lines.emplace_back(line_no, line);
    } else if (auto kind = SkipKind(lead); !kind.empty()) {
      out.set.warnings.push_back(
          {line_no, std::string(line.substr(0, line.find('\t'))),
           LinePrefix(line_no) + "skipped " + std::string(kind) + " annotation"});
    } else {
      const auto id = line.substr(0, std::min(line.find('\t'), line.find(' ')));
      record(line_no, LineError{ErrorKind::kSyntax, std::string(id),
                                "unrecognized annotation line"});
    }
  }

  // Relations resolve against every accepted entity, wherever it appears.
  for (const auto& [no, line] : relation_lines) {
    try {
      auto rel = ParseRelationLine(line, doc);
      rel.line = no;
      for (const auto* arg : {&rel.arg1, &rel.arg2}) {
        if (out.set.FindEntity(*arg) == nullptr) {
          throw LineError{ErrorKind::kDanglingArg, rel.ann_id,
                          "argument " + *arg + " does not name an accepted entity"};
        }
      }
      if (seen_ids.contains(rel.ann_id)) {
        throw LineError{ErrorKind::kSyntax, rel.ann_id, "duplicate annotation id"};
      }
      seen_ids.emplace(rel.ann_id, no);
      out.set.relations.push_back(std::move(rel));
    } catch (const LineError& err) {
      record(no, err);
    }
  }
  std::stable_sort(out.errors.begin(), out.errors.end(),
                   [](const Finding& a, const Finding& b) { return a.line < b.line; });
  return out;
}

AnnotationSet ParseStandoff(std::string_view ann_text, const Document& doc) {
  auto parsed = ParseStandoffCollect(ann_text, doc);
  if (!parsed.errors.empty()) {
    const auto& f = parsed.errors.front();
    ErrorKind kind = ErrorKind::kSyntax;
    if (f.kind == ErrorKindName(ErrorKind::kOffsetMismatch)) {
      kind = ErrorKind::kOffsetMismatch;
    } else if (f.kind == ErrorKindName(ErrorKind::kDanglingArg)) {
      kind = ErrorKind::kDanglingArg;
    }
    throw Error(kind, f.message, f.line, f.ann_id);
  }
  return std::move(parsed.set);
}

std::string SerializeStandoff(const AnnotationSet& set) {
  std::string out;
  for (const auto& e : set.entities) {
    out += e.ann_id + '\t' + e.class_name + ' ';
    for (std::size_t i = 0; i < e.fragments.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(e.fragments[i].first) + ' ' +
             std::to_string(e.fragments[i].second);
    }
    out += '\t' + e.surface + '\n';
  }
  for (const auto& r : set.relations) {
    out += r.ann_id + '\t' + r.property_name + " Arg1:" + r.arg1 + " Arg2:" +
           r.arg2 + '\n';
  }
  return out;
}

ValidationReport ValidateAnnotations(const AnnotationSet& set,
                                     const OntologySchema& schema) {
  ValidationReport report;
  auto add = [&](const std::string& id, ErrorKind kind, std::size_t line,
                 const std::string& message) {
    report.findings.push_back(Finding{set.doc_id, id, std::string(ErrorKindName(kind)),
                                      (line ? LinePrefix(line) : std::string()) + message,
                                      line});
  };
  for (const auto& e : set.entities) {
    if (!schema.HasClass(e.class_name)) {
      add(e.ann_id, ErrorKind::kUnknownClass, e.line,
          "class " + e.class_name + " is not declared");
    }
  }
  for (const auto& r : set.relations) {
    if (!schema.HasProperty(r.property_name)) {
      add(r.ann_id, ErrorKind::kUnknownProperty, r.line,
          "property " + r.property_name + " is not declared");
      continue;
    }
    const auto* head = set.FindEntity(r.arg1);
    const auto* tail = set.FindEntity(r.arg2);
    if (!head || !tail || !schema.HasClass(head->class_name) ||
        !schema.HasClass(tail->class_name)) {
      continue;  // already reported against the entity
    }
    if (!schema.CheckDomainRange(r.property_name, head->class_name,
                                 tail->class_name)) {
      add(r.ann_id, ErrorKind::kDomainRangeViolation, r.line,
          r.property_name + " does not accept " + head->class_name + " -> " +
              tail->class_name);
    }
  }
  return report;
}

ValidationReport AnnotationReport(std::string_view ann_text, const Document& doc,
                                  const OntologySchema& schema) {
  auto parsed = ParseStandoffCollect(ann_text, doc);
  ValidationReport report;
  report.findings = std::move(parsed.errors);
  for (const auto& w : parsed.set.warnings) {
    report.findings.push_back(
        Finding{doc.doc_id(), w.ann_id, "SkippedLine", w.message, w.line});
  }
  auto checks = ValidateAnnotations(parsed.set, schema);
  report.findings.insert(report.findings.end(), checks.findings.begin(),
                         checks.findings.end());
  std::stable_sort(report.findings.begin(), report.findings.end(),
                   [](const Finding& a, const Finding& b) { return a.line < b.line; });
  return report;
}

}  // namespace tinker
