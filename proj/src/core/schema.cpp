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

#include "tinker/schema.hpp"

#include <regex>
#include <sstream>
#include <vector>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

namespace {

constexpr std::string_view kDefaultSchema = R"(# Default malware ontology.
class Software
class Malware parent=Software
class MalwareFamily parent=Software
class ThreatActor
class Campaign
class AttackPattern
class Vulnerability
class Indicator
class Organization
class Location
class TimeInfo
class Infrastructure

prop similarTo domain=Malware,MalwareFamily range=Malware,MalwareFamily symmetric
prop variantOf domain=Malware range=Malware,MalwareFamily
prop involves domain=Malware,MalwareFamily,Campaign,ThreatActor range=Software,Indicator,Infrastructure,AttackPattern
prop uses domain=ThreatActor,Campaign,Malware range=Software,AttackPattern,Infrastructure
prop targets domain=Malware,ThreatActor,Campaign range=Organization,Location,Software
prop exploits domain=Malware,ThreatActor,Campaign,AttackPattern range=Vulnerability
prop hasVulnerability domain=Software range=Vulnerability
prop indicates domain=Indicator range=Malware,MalwareFamily,Campaign,ThreatActor,AttackPattern
prop attributedTo domain=Malware,MalwareFamily,Campaign range=ThreatActor
prop operatesFrom domain=ThreatActor,Infrastructure range=Location
prop hasTimeInfo domain=Malware,MalwareFamily,Campaign,ThreatActor,Vulnerability range=TimeInfo
prop impacts domain=Malware,Campaign,ThreatActor range=Organization,Location

expect Malware similarTo,involves,targets,exploits,attributedTo,hasTimeInfo
expect ThreatActor uses,targets,operatesFrom,exploits
expect Campaign uses,targets,attributedTo,hasTimeInfo
expect Vulnerability hasTimeInfo
)";

const std::regex& IdentifierRe() {
  static const std::regex re("[A-Za-z][A-Za-z0-9_]*");
  return re;
}

bool IsIdentifier(std::string_view s) {
  return std::regex_match(s.begin(), s.end(), IdentifierRe());
}

std::vector<std::string> Tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::set<std::string> NameList(std::string_view list, std::size_t line_no) {
  std::set<std::string> out;
  for (auto part : text::Split(list, ',')) {
    part = text::TrimAscii(part);
    if (!IsIdentifier(part)) {
      throw Error(ErrorKind::kSyntax,
                  "bad name '" + std::string(part) + "' in list", line_no);
    }
    out.emplace(part);
  }
  return out;
}

std::string Join(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

}  // namespace

std::string_view OntologySchema::DefaultText() { return kDefaultSchema; }

const OntologySchema& OntologySchema::Default() {
  static const OntologySchema schema = Load(kDefaultSchema);
  return schema;
}

OntologySchema OntologySchema::Load(std::string_view text) {
  if (text::TrimAscii(text) == "default") text = kDefaultSchema;

  OntologySchema schema;
  std::size_t line_no = 0;
  for (auto raw : text::Split(text, '\n')) {
    ++line_no;
    const auto line = text::TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto toks = Tokens(line);
    const std::string& kw = toks[0];

    if (kw == "class") {
      if (toks.size() < 2 || toks.size() > 3 || !IsIdentifier(toks[1])) {
        throw Error(ErrorKind::kSyntax, "expected 'class <Name> [parent=<Name>]'",
                    line_no);
      }
      ClassDef def{toks[1], std::nullopt, {}};
      if (toks.size() == 3) {
        if (!toks[2].starts_with("parent=") || !IsIdentifier(toks[2].substr(7))) {
          throw Error(ErrorKind::kSyntax, "bad parent clause '" + toks[2] + "'",
                      line_no);
        }
        def.parent = toks[2].substr(7);
      }
      if (!schema.classes_.emplace(def.name, def).second) {
        throw Error(ErrorKind::kValidation, "duplicate class " + def.name,
                    line_no, def.name);
      }
    } else if (kw == "prop") {
      if (toks.size() < 4 || !IsIdentifier(toks[1])) {
        throw Error(ErrorKind::kSyntax,
                    "expected 'prop <name> domain=<...> range=<...>'", line_no);
      }
      PropertyDef def;
      def.name = toks[1];
      bool have_domain = false, have_range = false;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (t.starts_with("domain=")) {
          def.domain = NameList(std::string_view(t).substr(7), line_no);
          have_domain = true;
        } else if (t.starts_with("range=")) {
          def.range = NameList(std::string_view(t).substr(6), line_no);
          have_range = true;
        } else if (t == "symmetric") {
          def.symmetric = true;
        } else if (t.starts_with("inverse=") && IsIdentifier(t.substr(8))) {
          def.inverse_of = t.substr(8);
        } else {
          throw Error(ErrorKind::kSyntax, "unexpected token '" + t + "'", line_no);
        }
      }
      if (!have_domain || !have_range) {
        throw Error(ErrorKind::kSyntax, "property needs domain= and range=",
                    line_no);
      }
      if (!schema.properties_.emplace(def.name, def).second) {
        throw Error(ErrorKind::kValidation, "duplicate property " + def.name,
                    line_no, def.name);
      }
    } else if (kw == "expect") {
      if (toks.size() != 3 || !IsIdentifier(toks[1])) {
        throw Error(ErrorKind::kSyntax, "expected 'expect <Class> <p1,p2,...>'",
                    line_no);
      }
      auto names = NameList(toks[2], line_no);
      schema.expected_[toks[1]].merge(names);
    } else {
      throw Error(ErrorKind::kSyntax, "unknown directive '" + kw + "'", line_no);
    }
  }
  if (schema.classes_.empty()) {
    throw Error(ErrorKind::kSyntax, "no classes declared");
  }
  schema.Validate();
  return schema;
}

void OntologySchema::Validate() const {
  for (const auto& [name, def] : classes_) {
    if (def.parent && !classes_.contains(*def.parent)) {
      throw Error(ErrorKind::kValidation,
                  "dangling parent " + *def.parent + " of class " + name,
                  std::nullopt, *def.parent);
    }
    // Walk the parent chain; a chain longer than the class count is a cycle.
    std::size_t steps = 0;
    const ClassDef* cur = &def;
    while (cur->parent) {
      if (++steps > classes_.size()) {
        throw Error(ErrorKind::kValidation,
                    "class hierarchy cycle through " + name, std::nullopt, name);
      }
      cur = &classes_.find(*cur->parent)->second;
    }
  }
  for (const auto& [name, def] : properties_) {
    if (def.domain.empty() || def.range.empty()) {
      throw Error(ErrorKind::kValidation,
                  "property " + name + " needs non-empty domain and range",
                  std::nullopt, name);
    }
    for (const auto* set : {&def.domain, &def.range}) {
      for (const auto& c : *set) {
        if (!classes_.contains(c)) {
          throw Error(ErrorKind::kValidation,
                      "property " + name + " references undeclared class " + c,
                      std::nullopt, c);
        }
      }
    }
    if (def.symmetric && def.domain != def.range) {
      throw Error(ErrorKind::kValidation,
                  "symmetric property " + name + " needs domain = range",
                  std::nullopt, name);
    }
    if (def.inverse_of) {
      auto it = properties_.find(*def.inverse_of);
      if (it == properties_.end()) {
        throw Error(ErrorKind::kValidation,
                    "property " + name + " names unknown inverse " + *def.inverse_of,
                    std::nullopt, *def.inverse_of);
      }
      if (it->second.inverse_of != name) {
        throw Error(ErrorKind::kValidation,
                    "inverse of " + name + " is not mutual", std::nullopt, name);
      }
    }
  }
  for (const auto& [cls, props] : expected_) {
    if (!classes_.contains(cls)) {
      throw Error(ErrorKind::kValidation, "expect names undeclared class " + cls,
                  std::nullopt, cls);
    }
    for (const auto& p : props) {
      if (!properties_.contains(p)) {
        throw Error(ErrorKind::kValidation,
                    "expect names undeclared property " + p, std::nullopt, p);
      }
    }
  }
}

std::string OntologySchema::Serialize() const {
  std::string out;
  for (const auto& [name, def] : classes_) {
    out += "class " + name;
    if (def.parent) out += " parent=" + *def.parent;
    out += '\n';
  }
  for (const auto& [name, def] : properties_) {
    out += "prop " + name + " domain=" + Join(def.domain) + " range=" +
           Join(def.range);
    if (def.symmetric) out += " symmetric";
    if (def.inverse_of) out += " inverse=" + *def.inverse_of;
    out += '\n';
  }
  for (const auto& [cls, props] : expected_) {
    out += "expect " + cls + " " + Join(props) + '\n';
  }
  return out;
}

bool OntologySchema::HasClass(std::string_view name) const {
  return classes_.contains(name);
}

bool OntologySchema::HasProperty(std::string_view name) const {
  return properties_.contains(name);
}

const ClassDef& OntologySchema::Class(std::string_view name) const {
  auto it = classes_.find(name);
  if (it == classes_.end()) {
    throw Error(ErrorKind::kUnknownClass, "unknown class " + std::string(name),
                std::nullopt, std::string(name));
  }
  return it->second;
}

const PropertyDef& OntologySchema::Property(std::string_view name) const {
  auto it = properties_.find(name);
  if (it == properties_.end()) {
    throw Error(ErrorKind::kUnknownProperty,
                "unknown property " + std::string(name), std::nullopt,
                std::string(name));
  }
  return it->second;
}

bool OntologySchema::IsSubclass(std::string_view a, std::string_view b) const {
  Class(b);
  const ClassDef* cur = &Class(a);
  while (true) {
    if (cur->name == b) return true;
    if (!cur->parent) return false;
    cur = &classes_.find(*cur->parent)->second;
  }
}

bool OntologySchema::CheckDomainRange(std::string_view relation,
                                      std::string_view head_class,
                                      std::string_view tail_class) const {
  const auto& prop = Property(relation);
  Class(head_class);
  Class(tail_class);
  auto fits = [&](std::string_view cls, const std::set<std::string>& allowed) {
    for (const auto& c : allowed) {
      if (IsSubclass(cls, c)) return true;
    }
    return false;
  };
  return fits(head_class, prop.domain) && fits(tail_class, prop.range);
}

std::optional<std::set<std::string>> OntologySchema::ExpectedProperties(
    std::string_view class_name) const {
  const ClassDef* cur = &Class(class_name);
  while (true) {
    if (auto it = expected_.find(cur->name); it != expected_.end()) {
      return it->second;
    }
    if (!cur->parent) return std::nullopt;
    cur = &classes_.find(*cur->parent)->second;
  }
}

}  // namespace tinker
