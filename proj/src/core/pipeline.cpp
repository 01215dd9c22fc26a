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

#include "tinker/pipeline.hpp"

#include <filesystem>

#include "tinker/error.hpp"
#include "tinker/parallel.hpp"
#include "tinker/text.hpp"

namespace tinker {

std::vector<EntitySpan> AutoSpans(const Document& doc, const AnnotationSet& hand,
                                  const IocExtractor& extractor) {
  std::vector<IocMatch> kept;
  for (auto& m : extractor.Extract(doc)) {
    const bool overlaps = std::any_of(
        hand.entities.begin(), hand.entities.end(), [&](const EntitySpan& s) {
          return std::any_of(s.fragments.begin(), s.fragments.end(), [&](const Span& f) {
            return f.first < m.end && m.start < f.second;
          });
        });
    if (!overlaps) kept.push_back(std::move(m));
  }
  return ToEntitySpans(kept, doc.doc_id());
}

CorpusData ProcessCorpus(const std::string& dir, const PipelineOptions& options) {
  if (!options.schema) throw Error(ErrorKind::kInvalidArgument, "no schema supplied");
  const auto files = ListCorpus(dir);
  CorpusData data;
  data.docs = LoadCorpus(dir, options.workers);
  data.annotations.resize(data.docs.size());
  std::vector<std::vector<Finding>> findings(data.docs.size());
  const IocExtractor& extractor =
      options.extractor ? *options.extractor : IocExtractor::Default();

  ParallelFor(data.docs.size(), options.workers, [&](std::size_t i) {
    const auto& doc = data.docs[i];
    const auto& file = files[i];
    std::string ann;
    if (std::filesystem::exists(file.ann_path)) ann = text::ReadFile(file.ann_path);
    findings[i] = AnnotationReport(ann, doc, *options.schema).findings;
    auto parsed = ParseStandoffCollect(ann, doc);
    auto& set = data.annotations[i];
    set = std::move(parsed.set);
    set.doc_id = doc.doc_id();
    if (options.include_iocs) {
      for (auto& span : AutoSpans(doc, set, extractor)) set.entities.push_back(std::move(span));
    }
  });
  for (auto& f : findings) {
    data.report.findings.insert(data.report.findings.end(), f.begin(), f.end());
  }
  return data;
}

KnowledgeGraph BuildCorpusGraph(const std::string& dir, const PipelineOptions& options) {
  const auto data = ProcessCorpus(dir, options);
  if (!data.report.ok()) {
    std::size_t violations = 0;
    std::string message;
    for (const auto& f : data.report.findings) {
      if (f.IsWarning()) continue;
      ++violations;
      message += "\n  " + f.doc_id + " " + f.ann_id + " " + f.kind + ": " + f.message;
    }
    throw Error(ErrorKind::kValidation,
                std::to_string(violations) + " annotation violation(s):" + message);
  }
  return BuildGraph(data.docs, data.annotations, options.schema, options.aliases,
                    BuildOptions{options.base_namespace});
}

std::map<std::string, std::string> ParseConfig(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (auto raw : text::Split(text, '\n')) {
    ++line_no;
    const auto line = text::TrimAscii(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kSyntax, "expected key=value", line_no);
    }
    const auto key = text::TrimAscii(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::kSyntax, "empty key", line_no);
    out[std::string(key)] = std::string(text::TrimAscii(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace tinker
