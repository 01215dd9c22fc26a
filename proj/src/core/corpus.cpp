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

#include "tinker/corpus.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <set>

#include "tinker/error.hpp"
#include "tinker/ioc.hpp"
#include "tinker/parallel.hpp"
#include "tinker/text.hpp"

namespace tinker {

namespace fs = std::filesystem;

std::string Document::Slice(std::size_t start, std::size_t end) const {
  end = std::min(end, chars_.size());
  if (start >= end) return {};
  return text::Encode(std::u32string_view(chars_).substr(start, end - start));
}

Document LoadDocument(std::string_view raw, std::string doc_id) {
  if (raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);
  std::string normalized;
  normalized.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      normalized.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      normalized.push_back(raw[i]);
    }
  }
  Document doc;
  doc.chars_ = text::Decode(normalized);
  if (std::all_of(doc.chars_.begin(), doc.chars_.end(), text::IsSpace)) {
    throw Error(ErrorKind::kEmptyDocument,
                "document " + doc_id + " is empty or whitespace-only",
                std::nullopt, doc_id);
  }
  doc.text_ = std::move(normalized);
  doc.doc_id_ = std::move(doc_id);
  return doc;
}

namespace {

bool IsTerminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool IsClosing(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case 0x201D: case 0x2019:
    case 0x00BB:
      return true;
    default:
      return false;
  }
}

bool IsOpening(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U'(': case U'[': case 0x201C: case 0x2018:
    case 0x00AB:
      return true;
    default:
      return false;
  }
}

constexpr std::array<std::u32string_view, 11> kAbbreviations = {
    U"e.g.", U"i.e.", U"vs.", U"inc.", U"corp.", U"ltd.",
    U"u.s.", U"mr.",  U"dr.", U"no.",  U"ver.",
};

// True when the word ending at `terminal` is a known abbreviation.
bool EndsAbbreviation(const std::u32string& c, std::size_t terminal) {
  std::size_t b = terminal;
  while (b > 0 && !text::IsSpace(c[b - 1])) --b;
  while (b < terminal && IsOpening(c[b])) ++b;
  std::u32string word;
  for (std::size_t i = b; i <= terminal; ++i) word.push_back(text::AsciiLower(c[i]));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

}  // namespace

std::vector<Sentence> SplitSentences(const Document& doc) {
  const auto& c = doc.chars();
  const std::size_t n = c.size();

  // A terminal inside an indicator (file names, domains, ...) never splits.
  std::vector<bool> protected_pos(n, false);
  for (const auto& m : IocExtractor::Default().Extract(doc)) {
    for (std::size_t i = m.start; i + 1 < m.end; ++i) protected_pos[i] = true;
  }

  std::vector<Sentence> out;
  auto skip_space = [&](std::size_t i) {
    while (i < n && text::IsSpace(c[i])) ++i;
    return i;
  };
  auto emit = [&](std::size_t start, std::size_t end) {
    while (end > start && text::IsSpace(c[end - 1])) --end;
    if (end > start) {
      out.push_back(Sentence{doc.doc_id(), out.size(), start, end});
    }
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    const char32_t ch = c[i];
    if (ch == U'\n') {
      std::size_t j = i + 1;
      while (j < n && c[j] != U'\n' && text::IsSpace(c[j])) ++j;
      if (j < n && c[j] == U'\n') {
        emit(start, i);
        start = skip_space(j);
        i = start;
        continue;
      }
      ++i;
      continue;
    }
    if (IsTerminal(ch) && !protected_pos[i]) {
      std::size_t j = i + 1;
      while (j < n && IsClosing(c[j])) ++j;
      if (j < n && text::IsSpace(c[j])) {
        const std::size_t k = skip_space(j);
        std::size_t m = k;
        while (m < n && IsOpening(c[m])) ++m;
        if (m < n && (text::IsUpper(c[m]) || text::IsDigit(c[m])) &&
            !EndsAbbreviation(c, i)) {
          // A blank line inside the gap is handled by the newline branch.
          emit(start, j);
          start = k;
          i = k;
          continue;
        }
      }
    }
    ++i;
  }
  if (start < n) emit(start, n);
  return out;
}

std::size_t SentenceIndexAt(const std::vector<Sentence>& sentences,
                            std::size_t offset) {
  auto it = std::upper_bound(
      sentences.begin(), sentences.end(), offset,
      [](std::size_t off, const Sentence& s) { return off < s.start; });
  if (it == sentences.begin()) return 0;
  return static_cast<std::size_t>(std::prev(it) - sentences.begin());
}

std::string DocIdFromFilename(std::string_view filename) {
  std::string stem(filename);
  if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0) {
    stem.resize(dot);
  }
  std::string out;
  for (char32_t ch : text::Decode(stem)) {
    out.push_back(text::IsAsciiAlnum(ch) ? static_cast<char>(text::AsciiLower(ch))
                                         : '-');
  }
  return out;
}

std::vector<CorpusFile> ListCorpus(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kIo, "not a directory: " + dir);
  }
  std::map<std::string, CorpusFile> by_id;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    const auto name = entry.path().filename().string();
    CorpusFile file{DocIdFromFilename(name), entry.path().string(),
                    (entry.path().parent_path() / entry.path().stem()).string() +
                        ".ann"};
    if (by_id.contains(file.doc_id)) {
      throw Error(ErrorKind::kValidation,
                  "two files map to doc id " + file.doc_id, std::nullopt,
                  file.doc_id);
    }
    by_id.emplace(file.doc_id, std::move(file));
  }
  if (ec) throw Error(ErrorKind::kIo, "cannot list " + dir + ": " + ec.message());
  std::vector<CorpusFile> out;
  for (auto& [id, file] : by_id) out.push_back(std::move(file));
  return out;
}

namespace {

struct Meta {
  std::string source_name;
  std::optional<int> year;
};

std::map<std::string, Meta> LoadMeta(const std::string& dir) {
  std::map<std::string, Meta> meta;
  const auto path = (fs::path(dir) / "meta.tsv").string();
  if (!fs::exists(path)) return meta;
  const std::string contents = text::ReadFile(path);
  std::size_t line_no = 0;
  for (auto line : text::Split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::TrimAscii(line).empty() || line.front() == '#') continue;
    auto cols = text::Split(line, '\t');
    if (line_no == 1 && cols[0] == "docId") continue;
    if (cols.size() < 2) {
      throw Error(ErrorKind::kSyntax, "meta.tsv needs docId and sourceName",
                  line_no);
    }
    Meta m{std::string(cols[1]), std::nullopt};
    if (cols.size() >= 3 && !text::TrimAscii(cols[2]).empty()) {
      try {
        m.year = std::stoi(std::string(cols[2]));
      } catch (const std::exception&) {
        throw Error(ErrorKind::kSyntax, "bad year in meta.tsv", line_no);
      }
    }
    meta[std::string(cols[0])] = std::move(m);
  }
  return meta;
}

}  // namespace

std::vector<Document> LoadCorpus(const std::string& dir, unsigned workers) {
  const auto files = ListCorpus(dir);
  const auto meta = LoadMeta(dir);
  std::vector<Document> docs(files.size());
  ParallelFor(files.size(), workers, [&](std::size_t i) {
    docs[i] = LoadDocument(text::ReadFile(files[i].txt_path), files[i].doc_id);
    if (auto it = meta.find(files[i].doc_id); it != meta.end()) {
      docs[i].set_source_name(it->second.source_name);
      docs[i].set_year(it->second.year);
    } else {
      docs[i].set_source_name(fs::path(files[i].txt_path).filename().string());
    }
  });
  return docs;
}

}  // namespace tinker
