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

#include "tinker/ioc.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "tinker/error.hpp"
#include "tinker/text.hpp"

namespace tinker {

namespace {

struct KindName {
  IocKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {IocKind::kIpv4, "ipv4"},         {IocKind::kDomain, "domain"},
    {IocKind::kUrl, "url"},           {IocKind::kEmail, "email"},
    {IocKind::kMd5, "md5"},           {IocKind::kSha1, "sha1"},
    {IocKind::kSha256, "sha256"},     {IocKind::kCveId, "cveId"},
    {IocKind::kFilename, "filename"}, {IocKind::kRegistryKey, "registryKey"},
    {IocKind::kFilepath, "filepath"},
};

// A dot, or one of its defanged spellings.
#define TK_DOT R"((?:\.|\[\.\]|\(\.\)))"

// Fifty common TLDs. None collides with the file-extension allow-list.
#define TK_TLDS                                                              \
  "(?:com|net|org|edu|gov|mil|int|info|biz|io|co|us|uk|ru|cn|de|fr|jp|br|" \
  "in|it|nl|au|ca|es|ch|se|pl|ir|kp|kr|tw|hk|sg|ua|by|kz|tr|il|sa|ae|xyz|" \
  "top|online|site|club|me|tv|cc|su)"

#define TK_FILE_EXTS "(?:exe|dll|sys|bat|ps1|docx|doc|pdf|js|vbs|tmp|bin|dat)"

bool IsWordChar(char32_t c) { return text::IsAsciiAlnum(c) || c == U'_'; }

// Characters that, directly before a match start, mean the match is really
// the tail of a longer token of the same kind.
bool BlocksStart(IocKind kind, char32_t prev) {
  switch (kind) {
    case IocKind::kIpv4:
      return IsWordChar(prev) || prev == U'.';
    case IocKind::kDomain:
      return IsWordChar(prev) || prev == U'-' || prev == U'.' || prev == U'@' ||
             prev == U'/' || prev == U'\\';
    case IocKind::kEmail:
      return IsWordChar(prev) || prev == U'.' || prev == U'%' || prev == U'+' ||
             prev == U'-';
    case IocKind::kFilename:
      return IsWordChar(prev) || prev == U'-' || prev == U'.';
    case IocKind::kFilepath:
      return IsWordChar(prev) || prev == U'/' || prev == U':' || prev == U'\\';
    case IocKind::kMd5:
    case IocKind::kSha1:
    case IocKind::kSha256:
    case IocKind::kCveId:
    case IocKind::kUrl:
    case IocKind::kRegistryKey:
      return IsWordChar(prev);
  }
  return false;
}

bool TrimsTrailing(char32_t c) {
  return c == U'.' || c == U',' || c == U';' || c == U':' || c == U'!' ||
         c == U'?' || c == U'\'';
}

// Kinds whose regex can swallow trailing sentence punctuation.
bool NeedsTrailingTrim(IocKind kind) {
  return kind == IocKind::kUrl || kind == IocKind::kRegistryKey ||
         kind == IocKind::kFilepath;
}

bool ValidIpv4(std::string_view normalized) {
  auto parts = text::Split(normalized, '.');
  if (parts.size() != 4) return false;
  for (auto p : parts) {
    if (p.empty() || p.size() > 3) return false;
    int v = 0;
    for (char c : p) v = v * 10 + (c - '0');
    if (v > 255) return false;
  }
  return true;
}

std::string ReplaceAll(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos;
       pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string ReplaceAllIcase(std::string s, std::string_view from,
                            std::string_view to) {
  const std::string needle = text::ToLowerAscii(from);
  std::string lower = text::ToLowerAscii(s);
  for (std::size_t pos = 0; (pos = lower.find(needle, pos)) != std::string::npos;) {
    s.replace(pos, from.size(), to);
    lower.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string Refang(std::string s) {
  s = ReplaceAll(std::move(s), "[.]", ".");
  s = ReplaceAll(std::move(s), "(.)", ".");
  s = ReplaceAllIcase(std::move(s), "[at]", "@");
  s = ReplaceAllIcase(std::move(s), "(at)", "@");
  s = ReplaceAll(std::move(s), "[@]", "@");
  s = ReplaceAll(std::move(s), "[://]", "://");
  s = ReplaceAll(std::move(s), "[:]", ":");
  if (text::ToLowerAscii(s.substr(0, 4)) == "hxxp") s.replace(0, 4, "http");
  return s;
}

std::wstring Widen(std::string_view utf8) {
  const auto chars = text::Decode(utf8);
  return std::wstring(chars.begin(), chars.end());
}

}  // namespace

std::string_view IocKindName(IocKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

std::optional<IocKind> ParseIocKind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  return std::nullopt;
}

std::optional<IocKind> HashKindForLength(std::size_t length) {
  switch (length) {
    case 32: return IocKind::kMd5;
    case 40: return IocKind::kSha1;
    case 64: return IocKind::kSha256;
    default: return std::nullopt;
  }
}

std::string NormalizeIoc(IocKind kind, std::string_view surface) {
  std::string s = Refang(std::string(surface));
  switch (kind) {
    case IocKind::kMd5:
    case IocKind::kSha1:
    case IocKind::kSha256:
    case IocKind::kDomain:
      return text::ToLowerAscii(s);
    case IocKind::kCveId:
      return text::ToUpperAscii(s);
    case IocKind::kEmail: {
      const auto at = s.find('@');
      if (at == std::string::npos) return s;
      return s.substr(0, at + 1) + text::ToLowerAscii(s.substr(at + 1));
    }
    case IocKind::kUrl: {
      const auto colon = s.find(':');
      if (colon == std::string::npos) return s;
      return text::ToLowerAscii(s.substr(0, colon)) + s.substr(colon);
    }
    default:
      return s;
  }
}

std::vector<IocPattern> IocExtractor::DefaultPatterns() {
  return {
      {IocKind::kUrl,
       R"((?:h(?:tt|xx)ps?|ftp)(?:://|\[://\]|\[:\]//)(?:[A-Za-z0-9\-._~:/?#@!$&*+,;=%]|\[\.\]|\(\.\))+)",
       110, true},
      {IocKind::kEmail,
       R"([A-Za-z0-9._%+\-]+(?:@|\[at\]|\(at\)|\[@\])(?:[A-Za-z0-9\-]+)" TK_DOT
       R"()+[A-Za-z]{2,24}(?![A-Za-z0-9\-_]))",
       100, true},
      {IocKind::kFilepath,
       R"((?:(?:[A-Za-z]:|%[A-Za-z_]+%)(?:\\[^\\\s/:*?"'<>|,;“”‘’\[\]()]+)+|/(?:etc|tmp|usr|var|bin|home|opt|dev|proc|root|Users|Library)(?:/[^/\s"'<>|,;“”‘’\[\]()]+)+))",
       90, false},
      {IocKind::kRegistryKey,
       R"((?:HKEY_(?:LOCAL_MACHINE|CURRENT_USER|CLASSES_ROOT|USERS|CURRENT_CONFIG)|HK(?:LM|CU|CR|CC|U))(?:\\[^\\\s"'<>|,;“”‘’\[\]()]+)+)",
       80, false},
      {IocKind::kFilename,
       R"([A-Za-z0-9_\-]+(?:\.[A-Za-z0-9_\-]+)*\.)" TK_FILE_EXTS
       R"((?![A-Za-z0-9_\-]))",
       70, true},
      {IocKind::kDomain,
       R"((?:[A-Za-z0-9](?:[A-Za-z0-9\-]{0,61}[A-Za-z0-9])?)" TK_DOT R"()+)" TK_TLDS
       R"((?![A-Za-z0-9\-_])(?!)" TK_DOT R"([A-Za-z0-9]))",
       60, true},
      {IocKind::kIpv4,
       R"((?:[0-9]{1,3})" TK_DOT R"(){3}[0-9]{1,3}(?![0-9A-Za-z_])(?!)" TK_DOT
       R"([0-9]))",
       50, false},
      {IocKind::kCveId, R"(CVE-[0-9]{4}-[0-9]{4,7}(?![0-9A-Za-z_]))", 40, true},
      {IocKind::kSha256, R"([A-Fa-f0-9]{64}(?![A-Za-z0-9_]))", 33, false},
      {IocKind::kSha1, R"([A-Fa-f0-9]{40}(?![A-Za-z0-9_]))", 32, false},
      {IocKind::kMd5, R"([A-Fa-f0-9]{32}(?![A-Za-z0-9_]))", 31, false},
  };
}

struct IocExtractor::Compiled {
  std::wregex re;
};

IocExtractor::IocExtractor(std::vector<IocPattern> patterns)
    : patterns_(std::move(patterns)) {
  std::set<IocKind> kinds;
  std::set<int> priorities;
  for (const auto& p : patterns_) {
    if (!kinds.insert(p.kind).second) {
      throw Error(ErrorKind::kValidation,
                  "duplicate pattern kind " + std::string(IocKindName(p.kind)));
    }
    if (!priorities.insert(p.priority).second) {
      throw Error(ErrorKind::kValidation,
                  "duplicate pattern priority " + std::to_string(p.priority));
    }
    auto flags = std::regex_constants::ECMAScript | std::regex_constants::optimize;
    if (p.ignore_case) flags |= std::regex_constants::icase;
    try {
      compiled_.push_back(std::make_unique<Compiled>(
          Compiled{std::wregex(Widen(p.pattern), flags)}));
    } catch (const std::regex_error& e) {
      throw Error(ErrorKind::kValidation,
                  "pattern for " + std::string(IocKindName(p.kind)) +
                      " does not compile: " + e.what());
    }
  }
}

IocExtractor::~IocExtractor() = default;
IocExtractor::IocExtractor(IocExtractor&&) noexcept = default;
IocExtractor& IocExtractor::operator=(IocExtractor&&) noexcept = default;

const IocExtractor& IocExtractor::Default() {
  static const IocExtractor extractor(DefaultPatterns());
  return extractor;
}

IocExtractor IocExtractor::FromPatternsFile(std::string_view file) {
  auto patterns = DefaultPatterns();
  std::size_t line_no = 0;
  for (auto raw : text::Split(file, '\n')) {
    ++line_no;
    const auto line = text::TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    // kind <name> priority <n> /<pattern>/[i]
    const auto slash = line.find('/');
    const auto last_slash = line.rfind('/');
    if (slash == std::string_view::npos || last_slash == slash) {
      throw Error(ErrorKind::kSyntax, "pattern must be enclosed in /.../", line_no);
    }
    const auto head = text::Split(text::TrimAscii(line.substr(0, slash)), ' ');
    std::vector<std::string_view> toks;
    for (auto t : head) {
      if (!t.empty()) toks.push_back(t);
    }
    const auto flags = text::TrimAscii(line.substr(last_slash + 1));
    if (toks.size() != 4 || toks[0] != "kind" || toks[2] != "priority" ||
        (!flags.empty() && flags != "i")) {
      throw Error(ErrorKind::kSyntax,
                  "expected 'kind <name> priority <n> /<pattern>/[i]'", line_no);
    }
    auto kind = ParseIocKind(toks[1]);
    if (!kind) {
      throw Error(ErrorKind::kSyntax, "unknown kind '" + std::string(toks[1]) + "'",
                  line_no);
    }
    int priority = 0;
    try {
      std::size_t used = 0;
      priority = std::stoi(std::string(toks[3]), &used);
      if (used != toks[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::kSyntax, "bad priority '" + std::string(toks[3]) + "'",
                  line_no);
    }
    IocPattern p{*kind, std::string(line.substr(slash + 1, last_slash - slash - 1)),
                 priority, flags == "i"};
    auto it = std::find_if(patterns.begin(), patterns.end(),
                           [&](const IocPattern& q) { return q.kind == *kind; });
    if (it != patterns.end()) {
      *it = std::move(p);
    } else {
      patterns.push_back(std::move(p));
    }
  }
  return IocExtractor(std::move(patterns));
}

std::vector<IocMatch> IocExtractor::Extract(const Document& doc) const {
  return Extract(doc.chars());
}

std::vector<IocMatch> IocExtractor::Extract(std::u32string_view chars) const {
  const std::wstring wide(chars.begin(), chars.end());

  struct Candidate {
    std::size_t start, end;
    int priority;
    std::size_t pattern;
  };
  std::vector<Candidate> candidates;

  for (std::size_t pi = 0; pi < patterns_.size(); ++pi) {
    const auto& pat = patterns_[pi];
    const auto& re = compiled_[pi]->re;
    std::size_t pos = 0;
    std::wsmatch m;
    while (pos < wide.size()) {
      auto begin = wide.cbegin() + static_cast<std::ptrdiff_t>(pos);
      auto flags = std::regex_constants::match_default;
      if (pos > 0) flags |= std::regex_constants::match_prev_avail;
      if (!std::regex_search(begin, wide.cend(), m, re, flags)) break;
      std::size_t start = pos + static_cast<std::size_t>(m.position(0));
      std::size_t end = start + static_cast<std::size_t>(m.length(0));
      if (m.length(0) == 0) {
        pos = start + 1;
        continue;
      }
      bool ok = !(start > 0 && BlocksStart(pat.kind, chars[start - 1]));
      if (ok && NeedsTrailingTrim(pat.kind)) {
        while (end > start && TrimsTrailing(chars[end - 1])) --end;
        // Drop an unmatched closing parenthesis picked up at the end.
        if (end > start && chars[end - 1] == U')' &&
            std::count(chars.begin() + start, chars.begin() + end, U'(') <
                std::count(chars.begin() + start, chars.begin() + end, U')')) {
          --end;
        }
        ok = end > start;
      }
      if (ok && pat.kind == IocKind::kIpv4) {
        ok = ValidIpv4(Refang(text::Encode(chars.substr(start, end - start))));
      }
      if (!ok) {
        pos = start + 1;
        continue;
      }
      candidates.push_back({start, end, pat.priority, pi});
      pos = end;
    }
  }

  // Longest span first, then priority; earlier start breaks remaining ties.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              const auto la = a.end - a.start, lb = b.end - b.start;
              if (la != lb) return la > lb;
              if (a.priority != b.priority) return a.priority > b.priority;
              return a.start < b.start;
            });
  std::map<std::size_t, std::size_t> taken;  // start -> end of accepted spans
  std::vector<IocMatch> out;
  for (const auto& c : candidates) {
    auto next = taken.lower_bound(c.start);
    if (next != taken.end() && next->first < c.end) continue;
    if (next != taken.begin() && std::prev(next)->second > c.start) continue;
    taken.emplace(c.start, c.end);
    const auto kind = patterns_[c.pattern].kind;
    auto surface = text::Encode(chars.substr(c.start, c.end - c.start));
    auto normalized = NormalizeIoc(kind, surface);
    out.push_back(IocMatch{kind, c.start, c.end, std::move(surface),
                           std::move(normalized)});
  }
  std::sort(out.begin(), out.end(), [](const IocMatch& a, const IocMatch& b) {
    return a.start < b.start;
  });
  return out;
}

std::vector<IocMatch> ExtractIocs(const Document& doc) {
  return IocExtractor::Default().Extract(doc);
}

std::vector<EntitySpan> ToEntitySpans(const std::vector<IocMatch>& matches,
                                      const std::string& doc_id) {
  std::vector<EntitySpan> out;
  out.reserve(matches.size());
  for (const auto& m : matches) {
    EntitySpan span;
    span.ann_id = "TA" + std::to_string(out.size() + 1);
    span.class_name = m.kind == IocKind::kCveId ? "Vulnerability" : "Indicator";
    span.fragments = {{m.start, m.end}};
    span.surface = m.normalized;
    span.doc_id = doc_id;
    out.push_back(std::move(span));
  }
  return out;
}

}  // namespace tinker
