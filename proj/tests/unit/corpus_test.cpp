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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "tinker/corpus.hpp"
#include "tinker/error.hpp"

namespace tinker {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> SentenceTexts(const Document& d) {
  std::vector<std::string> out;
  for (const auto& s : SplitSentences(d)) out.push_back(d.Slice(s.start, s.end));
  return out;
}

TEST(Document, NormalizesLineEndingsAndBom) {
  const auto d = LoadDocument("\xEF\xBB\xBFone\r\ntwo\rthree", "x");
  EXPECT_EQ(d.text(), "one\ntwo\nthree");
  EXPECT_EQ(d.length(), 13u);
}

TEST(Document, SliceUsesCharacterOffsets) {
  const auto d = LoadDocument("Ζευς uses é.", "x");
  EXPECT_EQ(d.Slice(0, 4), "Ζευς");
  EXPECT_EQ(d.Slice(10, 11), "é");
}

TEST(Document, EmptyAndInvalidInputs) {
  try {
    LoadDocument(" \n\t ", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyDocument);
  }
  try {
    LoadDocument("ok \xFF", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEncoding);
  }
}

TEST(Splitter, BreaksAfterTerminalPunctuation) {
  const auto d = LoadDocument("First one. Second one! Third? 4th starts here.", "x");
  EXPECT_EQ(SentenceTexts(d),
            (std::vector<std::string>{"First one.", "Second one!", "Third?",
                                      "4th starts here."}));
}

TEST(Splitter, IndicatorsAndAbbreviationsDoNotBreak) {
  const auto d = LoadDocument(
      "It drops agent.exe. Then it calls evil.example.com via e.g. HTTP. Done.", "x");
  const auto s = SentenceTexts(d);
  ASSERT_EQ(s.size(), 3u) << ::testing::PrintToString(s);
  EXPECT_EQ(s[1], "Then it calls evil.example.com via e.g. HTTP.");
}

TEST(Splitter, LowercaseContinuationDoesNotBreak) {
  const auto d = LoadDocument("Version 2. the loader runs.", "x");
  EXPECT_EQ(SplitSentences(d).size(), 1u);
}

TEST(Splitter, BlankLineEndsSentence) {
  const auto d = LoadDocument("Heading without stop\n\nBody text.", "x");
  EXPECT_EQ(SentenceTexts(d), (std::vector<std::string>{"Heading without stop", "Body text."}));
}

TEST(Splitter, ClosingQuoteStaysWithSentence) {
  const auto d = LoadDocument("He said \"stop.\" Then left.", "x");
  EXPECT_EQ(SentenceTexts(d), (std::vector<std::string>{"He said \"stop.\"", "Then left."}));
}

TEST(Splitter, SentencesPartitionWithoutOverlap) {
  const auto d = LoadDocument(text::ReadFile(testing::FixturePath("dustman/dustman.txt")), "d");
  const auto ss = SplitSentences(d);
  ASSERT_FALSE(ss.empty());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    EXPECT_EQ(ss[i].index, i);
    EXPECT_LT(ss[i].start, ss[i].end);
    if (i) EXPECT_LE(ss[i - 1].end, ss[i].start);
  }
  EXPECT_EQ(SentenceIndexAt(ss, 0), 0u);
  EXPECT_EQ(SentenceIndexAt(ss, d.length() - 1), ss.size() - 1);
}

TEST(Corpus, DocIdFromFilename) {
  EXPECT_EQ(DocIdFromFilename("APT 29 Report.txt"), "apt-29-report");
  EXPECT_EQ(DocIdFromFilename("dustman.txt"), "dustman");
}

TEST(Corpus, ListAndLoadAreSortedAndApplyMeta) {
  const auto files = ListCorpus(testing::FixturePath("corpus3"));
  ASSERT_EQ(files.size(), 3u);
  EXPECT_TRUE(std::is_sorted(files.begin(), files.end(),
                             [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; }));
  const auto docs = LoadCorpus(testing::FixturePath("corpus3"), 4);
  ASSERT_EQ(docs.size(), 3u);
  bool saw_meta = false;
  for (const auto& d : docs) saw_meta |= d.year().has_value();
  EXPECT_TRUE(saw_meta);
  EXPECT_EQ(docs, LoadCorpus(testing::FixturePath("corpus3"), 1));
}

TEST(Corpus, MissingDirectoryIsIoError) {
  try {
    ListCorpus("/nonexistent/corpus");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(Corpus, DocIdCollisionIsValidationError) {
  const auto dir = fs::temp_directory_path() / "tinker_collide";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "A Report.txt") << "One.";
  std::ofstream(dir / "a-report.txt") << "Two.";
  try {
    ListCorpus(dir.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace tinker
