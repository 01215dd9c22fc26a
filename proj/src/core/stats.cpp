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

#include "tinker/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "tinker/error.hpp"

namespace tinker {

ClassDistribution CountClasses(const std::vector<AnnotationSet>& sets) {
  ClassDistribution dist;
  for (const auto& set : sets) {
    for (const auto& span : set.entities) {
      auto& c = dist[span.class_name];
      ++c.total;
      if (span.IsAuto()) ++c.auto_ioc;
    }
  }
  return dist;
}

std::map<std::string, std::size_t> Totals(const ClassDistribution& dist) {
  std::map<std::string, std::size_t> out;
  for (const auto& [cls, c] : dist) out[cls] = c.total;
  return out;
}

std::vector<std::string> CoverageOrder(const std::map<std::string, std::size_t>& dist,
                                       double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  std::size_t total = 0;
  for (const auto& [cls, n] : dist) total += n;
  if (total == 0) throw Error(ErrorKind::kEmptyDistribution, "distribution is empty");

  std::vector<std::pair<std::string, std::size_t>> ranked(dist.begin(), dist.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const double need = threshold * static_cast<double>(total);
  const double slack = 1e-9 * static_cast<double>(total);
  std::vector<std::string> out;
  std::size_t sum = 0;
  for (const auto& [cls, n] : ranked) {
    out.push_back(cls);
    sum += n;
    if (static_cast<double>(sum) + slack >= need) break;
  }
  return out;
}

std::set<std::string> CoverageCutoff(const std::map<std::string, std::size_t>& dist,
                                     double threshold) {
  const auto order = CoverageOrder(dist, threshold);
  return {order.begin(), order.end()};
}

GraphSummary SummarizeGraph(const KnowledgeGraph& kg) {
  GraphSummary s;
  s.entities = kg.entities().size();
  for (const auto& [id, e] : kg.entities()) ++s.entities_per_class[e.class_name];
  std::set<std::string> docs;
  for (const auto& t : kg.triples()) {
    ++s.triples;
    ++(t.asserted ? s.asserted : s.inferred);
    ++s.triples_per_relation[t.key.relation];
    for (const auto& p : t.provenance) {
      if (p.source != ProvenanceSource::kInferred) docs.insert(p.doc_id);
    }
  }
  s.documents = docs.size();
  return s;
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

// Left-aligned first column, right-aligned others, two-space gutters.
std::string Table(const Rows& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      const std::string pad(width[i] - r[i].size(), ' ');
      line += i == 0 ? r[i] + pad : pad + r[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::string Percent(std::size_t n, std::size_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%",
                total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0);
  return buf;
}

}  // namespace

std::string FormatGraphSummary(const GraphSummary& s) {
  Rows rows{{"metric", "count"},
            {"entities", std::to_string(s.entities)},
            {"triples", std::to_string(s.triples)},
            {"asserted", std::to_string(s.asserted)},
            {"inferred", std::to_string(s.inferred)},
            {"documents", std::to_string(s.documents)}};
  for (const auto& [cls, n] : s.entities_per_class) {
    rows.push_back({"class " + cls, std::to_string(n)});
  }
  for (const auto& [rel, n] : s.triples_per_relation) {
    rows.push_back({"relation " + rel, std::to_string(n)});
  }
  return Table(rows);
}

std::string FormatDistribution(const ClassDistribution& dist,
                               const std::set<std::string>& covered, double threshold) {
  std::size_t total = 0;
  for (const auto& [cls, c] : dist) total += c.total;
  std::vector<std::pair<std::string, ClassCount>> ranked(dist.begin(), dist.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second.total > b.second.total;
  });
  char th[32];
  std::snprintf(th, sizeof th, "%g", threshold);
  Rows rows{{"class", "count", "auto", "share", std::string("within ") + th}};
  for (const auto& [cls, c] : ranked) {
    rows.push_back({cls, std::to_string(c.total), std::to_string(c.auto_ioc),
                    Percent(c.total, total), covered.contains(cls) ? "yes" : "no"});
  }
  rows.push_back({"total", std::to_string(total), "", "", ""});
  return Table(rows);
}

std::string GraphSummaryToJsonl(const GraphSummary& s) {
  nlohmann::ordered_json j;
  j["entities"] = s.entities;
  j["triples"] = s.triples;
  j["asserted"] = s.asserted;
  j["inferred"] = s.inferred;
  j["documents"] = s.documents;
  j["entitiesPerClass"] = s.entities_per_class;
  j["triplesPerRelation"] = s.triples_per_relation;
  return j.dump() + '\n';
}

std::string DistributionToJsonl(const ClassDistribution& dist,
                                const std::set<std::string>& covered, double threshold) {
  std::string out;
  for (const auto& [cls, c] : dist) {
    nlohmann::ordered_json j;
    j["class"] = cls;
    j["count"] = c.total;
    j["auto"] = c.auto_ioc;
    j["covered"] = covered.contains(cls);
    j["threshold"] = threshold;
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace tinker
