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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tinker/corpus.hpp"
#include "tinker/standoff.hpp"

namespace tinker {

enum class IocKind {
  kIpv4,
  kDomain,
  kUrl,
  kEmail,
  kMd5,
  kSha1,
  kSha256,
  kCveId,
  kFilename,
  kRegistryKey,
  kFilepath,
};

std::string_view IocKindName(IocKind kind);
std::optional<IocKind> ParseIocKind(std::string_view name);

struct IocPattern {
  IocKind kind;
  std::string pattern;  // ECMAScript regex source
  int priority = 0;     // higher wins on overlap between equal-length spans
  bool ignore_case = false;
};

struct IocMatch {
  IocKind kind;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string normalized;

  bool operator==(const IocMatch&) const = default;
};

// Canonical form of an indicator: defang markers removed ("hxxp", "[.]",
// "(.)", "[at]"), hashes lowercased, CVE ids uppercased, domains lowercased.
std::string NormalizeIoc(IocKind kind, std::string_view surface);

// The hash kind implied by a hex string's length, if any.
std::optional<IocKind> HashKindForLength(std::size_t length);

class IocExtractor {
 public:
  // Throws ValidationError for duplicate kinds, duplicate priorities or a
  // pattern that does not compile.
  explicit IocExtractor(std::vector<IocPattern> patterns);
  ~IocExtractor();
  IocExtractor(IocExtractor&&) noexcept;
  IocExtractor& operator=(IocExtractor&&) noexcept;

  static const IocExtractor& Default();
  static std::vector<IocPattern> DefaultPatterns();

  // Starts from the built-in set and replaces or adds each kind named in the
  // file. Lines: `kind <name> priority <n> /<regex>/[i]`; '#' comments.
  static IocExtractor FromPatternsFile(std::string_view text);

  const std::vector<IocPattern>& patterns() const { return patterns_; }

  // Overlaps resolve to the longer span, then the higher priority. Output is
  // sorted by start offset.
  std::vector<IocMatch> Extract(const Document& doc) const;
  std::vector<IocMatch> Extract(std::u32string_view chars) const;

 private:
  struct Compiled;
  std::vector<IocPattern> patterns_;
  std::vector<std::unique_ptr<Compiled>> compiled_;
};

std::vector<IocMatch> ExtractIocs(const Document& doc);

// Maps matches to EntitySpans with ids TA1, TA2, ... The class is Indicator,
// or Vulnerability for CVE ids; the surface is the normalized form.
std::vector<EntitySpan> ToEntitySpans(const std::vector<IocMatch>& matches,
                                      const std::string& doc_id);

}  // namespace tinker
