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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tinker {

// A plain-text threat report. Offsets into it count Unicode scalar values.
class Document {
 public:
  Document() = default;

  const std::string& doc_id() const { return doc_id_; }
  const std::string& text() const { return text_; }
  const std::u32string& chars() const { return chars_; }
  const std::string& source_name() const { return source_name_; }
  const std::optional<int>& year() const { return year_; }
  std::size_t length() const { return chars_.size(); }

  // UTF-8 text of the character range [start, end).
  std::string Slice(std::size_t start, std::size_t end) const;

  void set_source_name(std::string name) { source_name_ = std::move(name); }
  void set_year(std::optional<int> year) { year_ = year; }

  bool operator==(const Document&) const = default;

 private:
  friend Document LoadDocument(std::string_view, std::string);

  std::string doc_id_;
  std::string text_;
  std::u32string chars_;
  std::string source_name_;
  std::optional<int> year_;
};

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Sentence&) const = default;
};

// Normalizes CRLF and lone CR to LF and strips a leading byte-order mark.
// Throws EmptyDocument for whitespace-only text, EncodingError for invalid
// UTF-8.
Document LoadDocument(std::string_view text, std::string doc_id);

// Rule-based splitter: a sentence ends after '.', '!' or '?' (plus any
// closing quotes or brackets) when whitespace and then an uppercase letter or
// digit follow, and at blank lines. Known abbreviations and indicator tokens
// (file names, domains, addresses) never end a sentence.
std::vector<Sentence> SplitSentences(const Document& doc);

// Index of the sentence containing character `offset`, or the last sentence
// starting at or before it.
std::size_t SentenceIndexAt(const std::vector<Sentence>& sentences,
                            std::size_t offset);

// "APT 29 Report.txt" -> "apt-29-report"
std::string DocIdFromFilename(std::string_view filename);

struct CorpusFile {
  std::string doc_id;
  std::string txt_path;
  std::string ann_path;  // may not exist on disk
};

// Lists `*.txt` files of `dir` sorted by doc id. Throws IoError when the
// directory is missing and ValidationError on doc-id collisions.
std::vector<CorpusFile> ListCorpus(const std::string& dir);

// Loads every document in `dir`, applying `meta.tsv` (docId, sourceName,
// year) when present. Documents are read by `workers` threads; the result is
// ordered by doc id regardless.
std::vector<Document> LoadCorpus(const std::string& dir, unsigned workers = 1);

}  // namespace tinker
