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

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "tinker/error.hpp"
#include "tinker/inference.hpp"
#include "tinker/query.hpp"

namespace tinker {
namespace {

using testing::DefaultSchema;

template <typename Fn>
ErrorKind KindOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInvalidArgument;
}

std::vector<std::vector<std::string>> Ask(const KnowledgeGraph& kg, std::string_view q,
                                          const AliasTable& aliases = {}) {
  const auto query = ParseQuery(q);
  return Project(Evaluate(kg, query, true, aliases), query.select);
}

TEST(ParseQuery, Forms) {
  const auto q = ParseQuery("select ?m where { ?m involves \"Turla Driver Loader (TDL)\" . ?m a Malware }");
  EXPECT_EQ(q.select, (std::vector<std::string>{"m"}));
  ASSERT_EQ(q.patterns.size(), 2u);
  EXPECT_EQ(q.patterns[0].tail, (QueryTerm{QueryTerm::Kind::kLabel, "Turla Driver Loader (TDL)"}));
  EXPECT_TRUE(q.patterns[1].class_atom);
  EXPECT_EQ(q.patterns[1].tail.text, "Malware");

  const auto bare = ParseQuery("?a similarTo ?b. ?b involves dustman.exe");
  EXPECT_EQ(bare.select, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(bare.patterns.size(), 2u);
  EXPECT_EQ(bare.patterns[1].tail, (QueryTerm{QueryTerm::Kind::kId, "dustman.exe"}));

  EXPECT_EQ(ParseQuery("select * where { ?x ?r ?y }").select,
            (std::vector<std::string>{"x", "r", "y"}));
}

TEST(ParseQuery, Errors) {
  for (const char* bad : {"select ?m where { }", "", "?a similarTo", "?a b c d",
                          "select ?z where { ?a similarTo ?b }", "{ ?a similarTo ?b",
                          "?a similarTo \"open", "select where { ?a b ?c }",
                          "?a a \"Malware\""}) {
    EXPECT_EQ(KindOf([&] { ParseQuery(bad); }), ErrorKind::kSyntax) << bad;
  }
}

TEST(Evaluate, DustmanExamples) {
  const auto kg = testing::DustmanGraph();
  EXPECT_EQ(Ask(kg, "select ?m where { ?m involves \"Turla Driver Loader (TDL)\" }"),
            (std::vector<std::vector<std::string>>{{"dustman"}, {"zerocleare"}}));
  EXPECT_EQ(Ask(kg, "?m involves \"dustman.exe\""),
            (std::vector<std::vector<std::string>>{{"dustman"}}));
  EXPECT_EQ(Ask(kg, "?m similarTo ?n . ?n involves ?s . ?m involves ?s"),
            (std::vector<std::vector<std::string>>{
                {"dustman", "zerocleare", "turla-driver-loader-tdl"}}));
  EXPECT_TRUE(Ask(kg, "?m involves \"Nonexistent Tool\"").empty());
  EXPECT_TRUE(Ask(kg, "?m involves nonexistent").empty());
  EXPECT_EQ(Ask(kg, "?x a Software").size(), 3u);  // two Malware plus TDL
}

TEST(Evaluate, InferredTriplesCanBeExcluded) {
  const auto res = ApplyRulesFixpoint(testing::DustmanGraph(), DefaultRules(*DefaultSchema()));
  const auto q = ParseQuery("?a similarTo ?b");
  EXPECT_EQ(Evaluate(res.graph, q, true).size(), 2u);
  EXPECT_EQ(Evaluate(res.graph, q, false).size(), 1u);
}

TEST(Evaluate, LabelsResolveThroughAliases) {
  const auto kg = testing::Corpus3Graph();
  const auto aliases = testing::Corpus3Aliases();
  EXPECT_EQ(Ask(kg, "\"Aurora\" targets ?o", aliases),
            (std::vector<std::vector<std::string>>{{"google"}}));
  EXPECT_EQ(Ask(kg, "?m similarTo \"Zero Cleare\"", aliases),
            (std::vector<std::vector<std::string>>{{"dustman"}}));
}

TEST(Evaluate, UnknownVocabularyThrows) {
  const auto kg = testing::DustmanGraph();
  EXPECT_EQ(KindOf([&] { Evaluate(kg, ParseQuery("?a haunts ?b")); }),
            ErrorKind::kUnknownProperty);
  EXPECT_EQ(KindOf([&] { Evaluate(kg, ParseQuery("?a a Wizard")); }), ErrorKind::kUnknownClass);
}

TEST(Evaluate, RepeatedVariableInOnePattern) {
  KnowledgeGraph kg(DefaultSchema());
  kg.AddEntity("a", "Malware", "A");
  kg.AddEntity("b", "Malware", "B");
  kg.AddTriple({"a", "similarTo", "b"}, true);
  EXPECT_TRUE(Evaluate(kg, ParseQuery("?x similarTo ?x")).empty());
}

TEST(Evaluate, AgreesWithNaiveOracle) {
  testing::Rng rng(5);
  std::size_t nonempty = 0;
  for (int round = 0; round < 150; ++round) {
    const auto kg = testing::RandomGraph(rng, DefaultSchema(), {10, 60, true, 0.3});
    const auto q = testing::RandomQuery(rng, kg, 4);
    const bool inferred = testing::Uniform(rng, 0, 1);
    const auto got = Evaluate(kg, q, inferred);
    EXPECT_EQ(got, testing::NaiveEvaluate(kg, q, inferred)) << "round " << round;
    nonempty += !got.empty();
  }
  EXPECT_GT(nonempty, 30u);
}

TEST(Evaluate, PatternOrderDoesNotMatter) {
  testing::Rng rng(6);
  for (int round = 0; round < 60; ++round) {
    const auto kg = testing::RandomGraph(rng, DefaultSchema(), {12, 40, false, 0});
    auto q = testing::RandomQuery(rng, kg, 4);
    const auto base = Evaluate(kg, q);
    for (int perm = 0; perm < 4; ++perm) {
      std::shuffle(q.patterns.begin(), q.patterns.end(), rng);
      EXPECT_EQ(Evaluate(kg, q), base);
    }
  }
}

TEST(Project, SortsAndDeduplicates) {
  const std::vector<BindingSet> rows{{{"a", "2"}, {"b", "x"}}, {{"a", "1"}, {"b", "y"}},
                                     {{"a", "2"}, {"b", "z"}}};
  EXPECT_EQ(Project(rows, {"a"}), (std::vector<std::vector<std::string>>{{"1"}, {"2"}}));
}

TEST(CompetencyQuestions, MissingInfo) {
  const auto kg = testing::DustmanGraph();
  EXPECT_EQ(CqMissingInfo(kg, "dustman"),
            (std::set<std::string>{"targets", "exploits", "attributedTo", "hasTimeInfo"}));
  EXPECT_EQ(CqMissingInfo(kg, "zerocleare"),
            (std::set<std::string>{"similarTo", "targets", "exploits", "attributedTo",
                                   "hasTimeInfo"}));
  const auto res = ApplyRulesFixpoint(kg, DefaultRules(*DefaultSchema()));
  EXPECT_FALSE(CqMissingInfo(res.graph, "zerocleare", true).contains("similarTo"));
  EXPECT_TRUE(CqMissingInfo(res.graph, "zerocleare", false).contains("similarTo"));
  EXPECT_EQ(KindOf([&] { CqMissingInfo(kg, "ghost"); }), ErrorKind::kUnknownEntity);
  EXPECT_EQ(KindOf([&] { CqMissingInfo(kg, "dustman.exe"); }), ErrorKind::kNoExpectationDefined);
}

TEST(CompetencyQuestions, SharedFeatures) {
  const auto kg = testing::DustmanGraph();
  const auto one = CqSharedFeatures(kg, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].a, "dustman");
  EXPECT_EQ(one[0].b, "zerocleare");
  EXPECT_EQ(one[0].shared, (std::set<std::pair<std::string, std::string>>{
                               {"involves", "turla-driver-loader-tdl"}}));
  EXPECT_TRUE(CqSharedFeatures(kg, 2).empty());
  EXPECT_EQ(KindOf([&] { CqSharedFeatures(kg, 0); }), ErrorKind::kInvalidArgument);

  const auto corpus = CqSharedFeatures(testing::Corpus3Graph(), 1);
  for (std::size_t i = 1; i < corpus.size(); ++i) {
    EXPECT_GE(corpus[i - 1].shared.size(), corpus[i].shared.size());
  }
}

TEST(CompetencyQuestions, Impact) {
  const auto kg = testing::Corpus3Graph();
  const auto sub = CqImpact(kg, "stuxnet");
  std::set<std::string> ids;
  for (const auto& [id, e] : sub.entities()) ids.insert(id);
  EXPECT_EQ(ids, (std::set<std::string>{"stuxnet", "CVE-2010-2568", "natanz-enrichment-plant",
                                        "iran"}));
  EXPECT_EQ(sub.triple_count(), 3u);
  for (const auto& t : sub.triples()) EXPECT_TRUE(ImpactRelations().contains(t.key.relation));
  EXPECT_EQ(KindOf([&] { CqImpact(kg, "ghost"); }), ErrorKind::kUnknownEntity);
}

}  // namespace
}  // namespace tinker
