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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace tinker {

struct ClassDef {
  std::string name;
  std::optional<std::string> parent;
  std::string description;

  bool operator==(const ClassDef&) const = default;
};

struct PropertyDef {
  std::string name;
  std::set<std::string> domain;
  std::set<std::string> range;
  bool symmetric = false;
  std::optional<std::string> inverse_of;

  bool operator==(const PropertyDef&) const = default;
};

// Class/property vocabulary constraining every entity and triple. Immutable
// once built; share it through std::shared_ptr<const OntologySchema>.
class OntologySchema {
 public:
  // Parses the line-oriented schema format:
  //   class <Name> [parent=<Name>]
  //   prop <name> domain=<C1,C2> range=<C1,C2> [symmetric] [inverse=<name>]
  //   expect <Class> <p1,p2,...>
  // '#' starts a comment line. The single token `default` loads the
  // built-in schema.
  static OntologySchema Load(std::string_view text);
  static const OntologySchema& Default();
  static std::string_view DefaultText();

  std::string Serialize() const;

  bool HasClass(std::string_view name) const;
  bool HasProperty(std::string_view name) const;
  const ClassDef& Class(std::string_view name) const;
  const PropertyDef& Property(std::string_view name) const;

  // True iff `a` equals `b` or `b` is an ancestor of `a`.
  bool IsSubclass(std::string_view a, std::string_view b) const;

  // True iff head_class fits the property's domain and tail_class its range.
  bool CheckDomainRange(std::string_view relation, std::string_view head_class,
                        std::string_view tail_class) const;

  // Expected properties of `class_name`, falling back to the nearest ancestor
  // that declares some. nullopt when no class on the chain declares any.
  std::optional<std::set<std::string>> ExpectedProperties(
      std::string_view class_name) const;

  const std::map<std::string, ClassDef, std::less<>>& classes() const {
    return classes_;
  }
  const std::map<std::string, PropertyDef, std::less<>>& properties() const {
    return properties_;
  }
  const std::map<std::string, std::set<std::string>, std::less<>>&
  expected_properties() const {
    return expected_;
  }

  bool operator==(const OntologySchema&) const = default;

 private:
  void Validate() const;

  std::map<std::string, ClassDef, std::less<>> classes_;
  std::map<std::string, PropertyDef, std::less<>> properties_;
  std::map<std::string, std::set<std::string>, std::less<>> expected_;
};

using SchemaPtr = std::shared_ptr<const OntologySchema>;

}  // namespace tinker
