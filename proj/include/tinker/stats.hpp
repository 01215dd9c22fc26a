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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tinker/graph.hpp"
#include "tinker/standoff.hpp"

namespace tinker {

struct ClassCount {
  std::size_t total = 0;
  std::size_t auto_ioc = 0;  // spans produced by the indicator extractor

  bool operator==(const ClassCount&) const = default;
};

using ClassDistribution = std::map<std::string, ClassCount>;

// Entity spans per class across all sets.
ClassDistribution CountClasses(const std::vector<AnnotationSet>& sets);

// Plain class -> total view of a distribution.
std::map<std::string, std::size_t> Totals(const ClassDistribution& dist);

// Classes in greedy order (count descending, ties alphabetical) up to and
// including the first prefix covering `threshold` of the total.
// Throws EmptyDistribution when the total is zero and InvalidArgument unless
// 0 < threshold <= 1.
std::vector<std::string> CoverageOrder(const std::map<std::string, std::size_t>& dist,
                                       double threshold);

std::set<std::string> CoverageCutoff(const std::map<std::string, std::size_t>& dist,
                                     double threshold);

struct GraphSummary {
  std::size_t entities = 0;
  std::size_t triples = 0;
  std::size_t asserted = 0;
  std::size_t inferred = 0;
  std::size_t documents = 0;  // distinct document ids in provenance
  std::map<std::string, std::size_t> entities_per_class;
  std::map<std::string, std::size_t> triples_per_relation;

  bool operator==(const GraphSummary&) const = default;
};

GraphSummary SummarizeGraph(const KnowledgeGraph& kg);

// Aligned text tables.
std::string FormatGraphSummary(const GraphSummary& s);
std::string FormatDistribution(const ClassDistribution& dist,
                               const std::set<std::string>& covered, double threshold);

// One JSON object per line.
std::string GraphSummaryToJsonl(const GraphSummary& s);
std::string DistributionToJsonl(const ClassDistribution& dist,
                                const std::set<std::string>& covered, double threshold);

}  // namespace tinker
