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

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "tinker/error.hpp"
#include "tinker/inference.hpp"
#include "tinker/stats.hpp"

namespace tinker {
namespace {

using Dist = std::map<std::string, std::size_t>;

template <typename Fn>
ErrorKind KindOf(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInvalidArgument;
}

TEST(Coverage, GreedyPrefix) {
  const Dist d{{"Malware", 50}, {"Indicator", 30}, {"Location", 15}, {"TimeInfo", 5}};
  EXPECT_EQ(CoverageOrder(d, 0.8), (std::vector<std::string>{"Malware", "Indicator"}));
  EXPECT_EQ(CoverageOrder(d, 0.81),
            (std::vector<std::string>{"Malware", "Indicator", "Location"}));
  EXPECT_EQ(CoverageOrder(d, 1.0).size(), 4u);
  EXPECT_EQ(CoverageOrder(d, 0.5), (std::vector<std::string>{"Malware"}));
}

TEST(Coverage, TiesBreakAlphabetically) {
  const Dist d{{"b", 2}, {"a", 2}, {"c", 1}};
  EXPECT_EQ(CoverageOrder(d, 0.2), (std::vector<std::string>{"a"}));
  EXPECT_EQ(CoverageOrder(d, 0.8), (std::vector<std::string>{"a", "b"}));
}

TEST(Coverage, Errors) {
  EXPECT_EQ(KindOf([] { CoverageOrder({{"a", 0}}, 0.5); }), ErrorKind::kEmptyDistribution);
  EXPECT_EQ(KindOf([] { CoverageOrder({}, 0.5); }), ErrorKind::kEmptyDistribution);
  EXPECT_EQ(KindOf([] { CoverageOrder({{"a", 1}}, 0.0); }), ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([] { CoverageOrder({{"a", 1}}, 1.5); }), ErrorKind::kInvalidArgument);
}

TEST(Coverage, MatchesBruteForceAndIsMonotone) {
  testing::Rng rng(17);
  for (int round = 0; round < 300; ++round) {
    Dist d;
    const auto n = testing::Uniform(rng, 1, 9);
    for (std::size_t i = 0; i < n; ++i) {
      d["c" + std::to_string(i)] = testing::Uniform(rng, 0, 6) == 0 ? 0 : testing::Uniform(rng, 1, 40);
    }
    std::size_t total = 0;
    for (const auto& [k, v] : d) total += v;
    if (total == 0) continue;
    const double t = static_cast<double>(testing::Uniform(rng, 1, 100)) / 100.0;
    const auto order = CoverageOrder(d, t);
    EXPECT_EQ(order.size(), testing::MinCoverSize(d, t));
    std::size_t sum = 0;
    for (const auto& c : order) sum += d.at(c);
    EXPECT_EQ(sum, testing::MaxSumOfSize(d, order.size()));
    const double t2 = std::min(1.0, t + 0.1);
    const auto wider = CoverageCutoff(d, t2);
    for (const auto& c : CoverageCutoff(d, t)) EXPECT_TRUE(wider.contains(c));
  }
}

TEST(Distribution, CountsAutoSpansSeparately) {
  auto options = testing::DefaultOptions();
  options.include_iocs = true;
  const auto data = ProcessCorpus(testing::FixturePath("dustman"), options);
  const auto dist = CountClasses(data.annotations);
  EXPECT_EQ(dist.at("Malware"), (ClassCount{2, 0}));
  EXPECT_EQ(dist.at("Software"), (ClassCount{1, 0}));
  EXPECT_EQ(dist.at("Indicator"), (ClassCount{4, 3}));
  EXPECT_EQ(Totals(dist), (Dist{{"Indicator", 4}, {"Malware", 2}, {"Software", 1}}));
}

TEST(Distribution, FormatsTableAndJsonl) {
  const ClassDistribution dist{{"Malware", {6, 0}}, {"Indicator", {4, 3}}};
  const auto covered = CoverageCutoff(Totals(dist), 0.6);
  const auto table = FormatDistribution(dist, covered, 0.6);
  EXPECT_NE(table.find("Malware"), std::string::npos);
  EXPECT_NE(table.find("60.0%"), std::string::npos);
  std::size_t lines = 0;
  const auto jsonl = DistributionToJsonl(dist, covered, 0.6);
  for (const auto& l : text::Split(jsonl, '\n')) {
    if (l.empty()) continue;
    const auto j = nlohmann::json::parse(l);
    EXPECT_TRUE(j.contains("class"));
    ++lines;
  }
  EXPECT_EQ(lines, 2u);
}

TEST(Summary, CountsGraph) {
  const auto kg = testing::Corpus3Graph();
  const auto res = ApplyRulesFixpoint(kg, DefaultRules(*testing::DefaultSchema()));
  const auto s = SummarizeGraph(res.graph);
  EXPECT_EQ(s.entities, kg.entities().size());
  EXPECT_EQ(s.triples, res.graph.triple_count());
  EXPECT_EQ(s.asserted + s.inferred, s.triples);
  EXPECT_EQ(s.inferred, res.added);
  EXPECT_EQ(s.documents, 3u);
  std::size_t per_rel = 0;
  for (const auto& [r, n] : s.triples_per_relation) per_rel += n;
  EXPECT_EQ(per_rel, s.triples);
  EXPECT_NE(FormatGraphSummary(s).find("triples"), std::string::npos);
  const auto jsonl = GraphSummaryToJsonl(s);
  for (const auto& l : text::Split(jsonl, '\n')) {
    if (!l.empty()) EXPECT_TRUE(nlohmann::json::accept(l));
  }
}

}  // namespace
}  // namespace tinker
