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

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "tinker/error.hpp"
#include "tinker/inference.hpp"

namespace tinker {
namespace {

using testing::DefaultSchema;

std::vector<Rule> Defaults() { return DefaultRules(*DefaultSchema()); }

std::vector<Rule> WithCoInvolve() {
  return LoadRules("enable co-involve\n", *DefaultSchema(), {}, Defaults());
}

template <typename Fn>
Error Caught(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  return Error(ErrorKind::kInvalidArgument, "nothing thrown");
}

TEST(Rules, DefaultSet) {
  std::vector<std::string> names;
  for (const auto& r : Defaults()) names.push_back(r.name + (r.enabled ? "" : "(off)"));
  EXPECT_EQ(names, (std::vector<std::string>{"sym-similarTo", "variant-similar", "co-involve(off)"}));
  const auto schema = std::make_shared<const OntologySchema>(OntologySchema::Load(
      "class A\nprop p domain=A range=A inverse=q\nprop q domain=A range=A inverse=p\n"));
  const auto rules = DefaultRules(*schema);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].name, "inv-pairs");
  EXPECT_EQ(rules[1].name, "inv-pairs");
  EXPECT_EQ(rules[0].head.relation, "q");
}

TEST(Rules, LoadParsesPatternsAndLabels) {
  const auto aliases = AliasTable::Load("Zero Cleare\tZeroCleare\tMalware\n");
  const auto rules = LoadRules(
      "# custom\n"
      "rule wipers: (?x similarTo \"Zero Cleare\") & (?x involves ?f) => (?f indicates ?x)\n"
      "disable sym-similarTo\n",
      *DefaultSchema(), aliases, Defaults());
  ASSERT_EQ(rules.size(), 4u);
  EXPECT_FALSE(rules[0].enabled);
  const auto& r = rules.back();
  EXPECT_EQ(r.name, "wipers");
  ASSERT_EQ(r.body.size(), 2u);
  EXPECT_FALSE(r.body[0].tail.is_variable);
  EXPECT_NE(std::find(r.body[0].tail.candidates.begin(), r.body[0].tail.candidates.end(),
                      "zerocleare"),
            r.body[0].tail.candidates.end());
  EXPECT_EQ(r.head, (RulePattern{RuleTerm::Var("f"), "indicates", RuleTerm::Var("x")}));
}

TEST(Rules, RedefinitionReplacesInPlace) {
  const auto rules = LoadRules("rule sym-similarTo: (?a similarTo ?b) => (?a similarTo ?b)\n",
                               *DefaultSchema(), {}, Defaults());
  ASSERT_EQ(rules.size(), 3u);
  EXPECT_EQ(rules[0].name, "sym-similarTo");
  EXPECT_EQ(rules[0].head.head, RuleTerm::Var("a"));
}

TEST(Rules, InvalidRulesCarryLineNumbers) {
  const auto& s = *DefaultSchema();
  auto check = [&](std::string_view text, std::size_t line,
                   ErrorKind kind = ErrorKind::kInvalidRule) {
    const auto e = Caught([&] { LoadRules(text, s, {}, {}); });
    EXPECT_EQ(e.kind(), kind) << text << ": " << e.what();
    ASSERT_TRUE(e.line()) << text;
    EXPECT_EQ(*e.line(), line) << text;
  };
  check("rule r: (?a haunts ?b) => (?b haunts ?a)\n", 1);
  check("\nrule r: (?a similarTo ?b) => (?c similarTo ?a)\n", 2);
  check("enable nothing-by-this-name\n", 1);
  // Grammar problems are syntax errors.
  check("rule r: => (?a similarTo ?b)\n", 1, ErrorKind::kSyntax);
  check("rule r (?a similarTo ?b) => (?b similarTo ?a)\n", 1, ErrorKind::kSyntax);
  check("# c\nfrobnicate\n", 2, ErrorKind::kSyntax);
  EXPECT_EQ(Caught([&] { ValidateRule(Rule{"", {}, {}, true}, s); }).kind(),
            ErrorKind::kInvalidRule);
}

TEST(Fixpoint, SymmetryOnDustman) {
  const auto kg = testing::DustmanGraph();
  const auto res = ApplyRulesFixpoint(kg, Defaults());
  EXPECT_EQ(res.added, 1u);
  EXPECT_LE(res.iterations, 2u);
  EXPECT_EQ(res.graph.triple_count(), 5u);
  const auto* t = res.graph.FindTriple({"zerocleare", "similarTo", "dustman"});
  ASSERT_NE(t, nullptr);
  EXPECT_FALSE(t->asserted);
  ASSERT_EQ(t->provenance.size(), 1u);
  EXPECT_EQ(t->provenance[0].source, ProvenanceSource::kInferred);
  EXPECT_EQ(t->provenance[0].rule_name, "sym-similarTo");
  EXPECT_EQ(t->provenance[0].premises,
            (std::vector<TripleKey>{{"dustman", "similarTo", "zerocleare"}}));
  // The asserted side gains an inferred derivation but stays asserted.
  const auto* fwd = res.graph.FindTriple({"dustman", "similarTo", "zerocleare"});
  EXPECT_TRUE(fwd->asserted);
  EXPECT_EQ(fwd->provenance.size(), 2u);
}

TEST(Fixpoint, CoInvolvePropagatesIndicators) {
  const auto res = ApplyRulesFixpoint(testing::DustmanGraph(), WithCoInvolve());
  const auto* t = res.graph.FindTriple({"zerocleare", "involves", "dustman.exe"});
  ASSERT_NE(t, nullptr);
  EXPECT_FALSE(t->asserted);
  EXPECT_EQ(res.added, 2u);
}

TEST(Fixpoint, CoInvolveOnCorpus) {
  const auto res = ApplyRulesFixpoint(testing::Corpus3Graph(), WithCoInvolve());
  for (const char* f : {"assistant.sys", "elrawdisk.sys", "agent.exe", "dustman.exe"}) {
    const auto* t = res.graph.FindTriple({"zerocleare", "involves", f});
    ASSERT_NE(t, nullptr) << f;
    EXPECT_FALSE(t->asserted) << f;
  }
  EXPECT_EQ(res.added, 5u);
  EXPECT_EQ(res.iterations, 3u);
}

TEST(Fixpoint, Idempotent) {
  for (const auto& rules : {Defaults(), WithCoInvolve()}) {
    const auto once = ApplyRulesFixpoint(testing::Corpus3Graph(), rules);
    const auto twice = ApplyRulesFixpoint(once.graph, rules);
    EXPECT_EQ(twice.added, 0u);
    EXPECT_TRUE(twice.graph == once.graph);
  }
}

TEST(Fixpoint, NoEnabledRulesMeansNoRounds) {
  auto rules = Defaults();
  for (auto& r : rules) r.enabled = false;
  const auto res = ApplyRulesFixpoint(testing::DustmanGraph(), rules);
  EXPECT_EQ(res.iterations, 0u);
  EXPECT_EQ(res.added, 0u);
}

TEST(Fixpoint, InvalidFiringsBecomeWarnings) {
  const auto rules = LoadRules("rule flip: (?a involves ?b) => (?b involves ?a)\n",
                               *DefaultSchema(), {}, {});
  const auto res = ApplyRulesFixpoint(testing::DustmanGraph(), rules);
  // Only the Malware tail of a Malware->Software edge could flip; none exist.
  EXPECT_EQ(res.added, 0u);
  EXPECT_FALSE(res.warnings.empty());
  EXPECT_TRUE(std::is_sorted(res.warnings.begin(), res.warnings.end()));
  EXPECT_EQ(std::adjacent_find(res.warnings.begin(), res.warnings.end()), res.warnings.end());
}

TEST(Fixpoint, ConstantTerms) {
  const auto rules = LoadRules(
      "rule tdl-users: (?m involves \"Turla Driver Loader (TDL)\") => (?m similarTo \"DUSTMAN\")\n",
      *DefaultSchema(), {}, {});
  const auto res = ApplyRulesFixpoint(testing::DustmanGraph(), rules);
  EXPECT_EQ(res.added, 1u);
  EXPECT_NE(res.graph.FindTriple({"zerocleare", "similarTo", "dustman"}), nullptr);
  EXPECT_FALSE(res.warnings.empty());  // dustman -> dustman is reflexive
}

// Random rule over a fixed variable pool, heads built from body variables.
Rule RandomRule(testing::Rng& rng, int n) {
  const auto& schema = *DefaultSchema();
  std::vector<std::string> props;
  for (const auto& [p, d] : schema.properties()) props.push_back(p);
  const std::vector<std::string> pool{"a", "b", "c"};
  Rule r;
  r.name = "r" + std::to_string(n);
  const auto len = testing::Uniform(rng, 1, 2);
  std::vector<std::string> used;
  for (std::size_t i = 0; i < len; ++i) {
    RulePattern p{RuleTerm::Var(testing::Pick(rng, pool)), testing::Pick(rng, props),
                  RuleTerm::Var(testing::Pick(rng, pool))};
    used.push_back(p.head.name);
    used.push_back(p.tail.name);
    r.body.push_back(p);
  }
  r.head = {RuleTerm::Var(testing::Pick(rng, used)), testing::Pick(rng, props),
            RuleTerm::Var(testing::Pick(rng, used))};
  return r;
}

TEST(Fixpoint, MatchesNaiveOracle) {
  testing::Rng rng(99);
  for (int round = 0; round < 60; ++round) {
    const auto kg = testing::RandomGraph(rng, DefaultSchema(), {12, 25, true, 0.1});
    std::vector<Rule> rules = Defaults();
    rules.back().enabled = testing::Uniform(rng, 0, 1);
    for (int i = 0; i < 3; ++i) rules.push_back(RandomRule(rng, i));
    const auto res = ApplyRulesFixpoint(kg, rules);
    const auto oracle = testing::NaiveInfer(kg, rules);
    std::set<TripleKey> keys;
    for (const auto& t : res.graph.triples()) keys.insert(t.key);
    ASSERT_EQ(keys, oracle.keys) << "round " << round;
    EXPECT_EQ(res.added, oracle.added);
    // Final provenance = input provenance plus every naive derivation.
    for (const auto& t : res.graph.triples()) {
      std::set<Provenance> expected;
      if (const auto* before = kg.FindTriple(t.key)) {
        EXPECT_EQ(t.asserted, before->asserted);
        expected.insert(before->provenance.begin(), before->provenance.end());
      } else {
        EXPECT_FALSE(t.asserted);
      }
      if (auto it = oracle.derivations.find(t.key); it != oracle.derivations.end()) {
        expected.insert(it->second.begin(), it->second.end());
      }
      const std::set<Provenance> got(t.provenance.begin(), t.provenance.end());
      EXPECT_EQ(got.size(), t.provenance.size()) << "duplicate provenance";
      EXPECT_TRUE(got == expected) << t.key.ToString();
    }
  }
}

TEST(Explain, WalksBackToAssertedSources) {
  const auto res = ApplyRulesFixpoint(testing::DustmanGraph(), WithCoInvolve());
  const auto d = Explain(res.graph, {"zerocleare", "involves", "dustman.exe"});
  EXPECT_FALSE(d.asserted);
  EXPECT_EQ(d.rule, "co-involve");
  ASSERT_EQ(d.premises.size(), 2u);
  EXPECT_EQ(d.premises[0].key, (TripleKey{"zerocleare", "similarTo", "dustman"}));
  EXPECT_EQ(d.premises[0].rule, "sym-similarTo");
  EXPECT_TRUE(d.premises[1].asserted);
  EXPECT_EQ(d.premises[1].sources.size(), 1u);
  const auto text = FormatDerivation(d);
  EXPECT_EQ(text.rfind("⟨zerocleare, involves, dustman.exe⟩ [inferred by co-involve]", 0), 0u);
  EXPECT_NE(text.find("\n  "), std::string::npos);
  EXPECT_EQ(Caught([&] { Explain(res.graph, {"a", "b", "c"}); }).kind(),
            ErrorKind::kUnknownTriple);
}

}  // namespace
}  // namespace tinker
