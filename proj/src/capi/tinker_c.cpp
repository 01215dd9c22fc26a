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

#include "tinker/tinker.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>

#include <nlohmann/json.hpp>

#include "tinker/error.hpp"
#include "tinker/inference.hpp"
#include "tinker/ioc.hpp"
#include "tinker/pipeline.hpp"
#include "tinker/query.hpp"
#include "tinker/rdf_io.hpp"
#include "tinker/stats.hpp"
#include "tinker/text.hpp"

struct tinker_context {
  tinker::SchemaPtr schema =
      std::make_shared<const tinker::OntologySchema>(tinker::OntologySchema::Default());
  tinker::AliasTable aliases;
  std::string base_namespace = std::string(tinker::kDefaultNamespace);
  unsigned workers = 1;
  bool include_iocs = false;
  std::optional<std::string> ioc_patterns;  // file contents
};

struct tinker_graph {
  tinker::KnowledgeGraph kg;
};

namespace {

thread_local std::string g_last_error;

tinker_status StatusFor(tinker::ErrorKind kind) {
  return static_cast<tinker_status>(static_cast<int>(kind) + 1);
}

template <typename Fn>
tinker_status Guard(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return TINKER_OK;
  } catch (const tinker::Error& e) {
    g_last_error = e.what();
    return StatusFor(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return TINKER_E_INTERNAL;
}

void Require(const void* p, const char* what) {
  if (!p) {
    throw tinker::Error(tinker::ErrorKind::kInvalidArgument,
                        std::string(what) + " must not be null");
  }
}

char* Dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

tinker::PipelineOptions Options(const tinker_context& ctx) {
  tinker::PipelineOptions o;
  o.schema = ctx.schema;
  o.aliases = ctx.aliases;
  o.base_namespace = ctx.base_namespace;
  o.workers = ctx.workers;
  o.include_iocs = ctx.include_iocs;
  if (ctx.ioc_patterns) o.extractor = tinker::IocExtractor::FromPatternsFile(*ctx.ioc_patterns);
  return o;
}

std::string Export(const tinker::KnowledgeGraph& kg, std::string_view format) {
  if (format == "nt") return tinker::SerializeNTriples(kg);
  if (format == "ttl") return tinker::SerializeTurtle(kg);
  if (format == "dot") return tinker::ExportDot(kg);
  if (format == "graphml") return tinker::ExportGraphml(kg);
  throw tinker::Error(tinker::ErrorKind::kInvalidArgument,
                      "unknown format '" + std::string(format) + "'");
}

}  // namespace

extern "C" {

const char* tinker_version(void) { return "0.1.0"; }

const char* tinker_status_name(tinker_status status) {
  if (status == TINKER_OK) return "OK";
  if (status == TINKER_E_INTERNAL) return "InternalError";
  const int k = static_cast<int>(status) - 1;
  if (k >= 0 && k <= static_cast<int>(tinker::ErrorKind::kInvalidArgument)) {
    return tinker::ErrorKindName(static_cast<tinker::ErrorKind>(k)).data();
  }
  return "UnknownStatus";
}

const char* tinker_last_error(void) { return g_last_error.c_str(); }

void tinker_string_free(char* s) { std::free(s); }

tinker_status tinker_context_new(tinker_context** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new tinker_context();
  });
}

void tinker_context_free(tinker_context* ctx) { delete ctx; }

tinker_status tinker_context_set_schema_text(tinker_context* ctx, const char* text) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(text, "text");
    ctx->schema =
        std::make_shared<const tinker::OntologySchema>(tinker::OntologySchema::Load(text));
  });
}

tinker_status tinker_context_set_schema_file(tinker_context* ctx, const char* path) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(path, "path");
    const std::string text =
        std::strcmp(path, "default") == 0 ? "default" : tinker::text::ReadFile(path);
    ctx->schema =
        std::make_shared<const tinker::OntologySchema>(tinker::OntologySchema::Load(text));
  });
}

tinker_status tinker_context_set_namespace(tinker_context* ctx, const char* uri) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(uri, "uri");
    std::string ns(uri);
    if (ns.empty() || ns.find_first_of(" <>\"") != std::string::npos ||
        ns.find(':') == std::string::npos) {
      throw tinker::Error(tinker::ErrorKind::kInvalidArgument, "invalid namespace URI " + ns);
    }
    if (ns.back() != '/' && ns.back() != '#') ns += '/';
    ctx->base_namespace = ns;
  });
}

tinker_status tinker_context_set_aliases_file(tinker_context* ctx, const char* path) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(path, "path");
    ctx->aliases = tinker::AliasTable::Load(tinker::text::ReadFile(path));
  });
}

tinker_status tinker_context_set_workers(tinker_context* ctx, unsigned workers) {
  return Guard([&] {
    Require(ctx, "ctx");
    if (workers == 0) {
      throw tinker::Error(tinker::ErrorKind::kInvalidArgument, "workers must be at least 1");
    }
    ctx->workers = workers;
  });
}

tinker_status tinker_context_set_include_iocs(tinker_context* ctx, int enabled) {
  return Guard([&] {
    Require(ctx, "ctx");
    ctx->include_iocs = enabled != 0;
  });
}

tinker_status tinker_context_set_ioc_patterns_file(tinker_context* ctx, const char* path) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(path, "path");
    auto text = tinker::text::ReadFile(path);
    (void)tinker::IocExtractor::FromPatternsFile(text);  // validate now
    ctx->ioc_patterns = std::move(text);
  });
}

tinker_status tinker_validate_corpus(tinker_context* ctx, const char* dir,
                                     char** report_jsonl, int* ok) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(dir, "dir");
    Require(report_jsonl, "report_jsonl");
    const auto data = tinker::ProcessCorpus(dir, Options(*ctx));
    if (ok) *ok = data.report.ok() ? 1 : 0;
    *report_jsonl = Dup(data.report.ToJsonl());
  });
}

tinker_status tinker_build_corpus(tinker_context* ctx, const char* dir, tinker_graph** out) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(dir, "dir");
    Require(out, "out");
    *out = new tinker_graph{tinker::BuildCorpusGraph(dir, Options(*ctx))};
  });
}

tinker_status tinker_extract_iocs(tinker_context* ctx, const char* dir, int json,
                                  char** out) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(dir, "dir");
    Require(out, "out");
    const auto docs = tinker::LoadCorpus(dir, ctx->workers);
    std::optional<tinker::IocExtractor> custom;
    if (ctx->ioc_patterns) custom = tinker::IocExtractor::FromPatternsFile(*ctx->ioc_patterns);
    const auto& extractor = custom ? *custom : tinker::IocExtractor::Default();
    std::string text;
    for (const auto& doc : docs) {
      for (const auto& m : extractor.Extract(doc)) {
        if (json) {
          nlohmann::ordered_json j;
          j["docId"] = doc.doc_id();
          j["kind"] = tinker::IocKindName(m.kind);
          j["start"] = m.start;
          j["end"] = m.end;
          j["surface"] = m.surface;
          j["normalized"] = m.normalized;
          text += j.dump() + '\n';
        } else {
          text += doc.doc_id() + '\t' + std::string(tinker::IocKindName(m.kind)) + '\t' +
                  std::to_string(m.start) + '\t' + std::to_string(m.end) + '\t' +
                  m.normalized + '\n';
        }
      }
    }
    *out = Dup(text);
  });
}

tinker_status tinker_corpus_stats(tinker_context* ctx, const char* dir, double threshold,
                                  int json, char** out) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(dir, "dir");
    Require(out, "out");
    const auto data = tinker::ProcessCorpus(dir, Options(*ctx));
    const auto dist = tinker::CountClasses(data.annotations);
    const auto covered = tinker::CoverageCutoff(tinker::Totals(dist), threshold);
    *out = Dup(json ? tinker::DistributionToJsonl(dist, covered, threshold)
                    : tinker::FormatDistribution(dist, covered, threshold));
  });
}

tinker_status tinker_graph_load(tinker_context* ctx, const char* path, tinker_graph** out) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(path, "path");
    Require(out, "out");
    *out = new tinker_graph{tinker::LoadGraph(path, ctx->schema, ctx->base_namespace)};
  });
}

tinker_status tinker_graph_save(const tinker_graph* g, const char* path) {
  return Guard([&] {
    Require(g, "graph");
    Require(path, "path");
    tinker::SaveGraph(g->kg, path);
  });
}

void tinker_graph_free(tinker_graph* g) { delete g; }

size_t tinker_graph_entity_count(const tinker_graph* g) {
  return g ? g->kg.entities().size() : 0;
}

size_t tinker_graph_triple_count(const tinker_graph* g) {
  return g ? g->kg.triple_count() : 0;
}

tinker_status tinker_graph_summary(const tinker_graph* g, int json, char** out) {
  return Guard([&] {
    Require(g, "graph");
    Require(out, "out");
    const auto s = tinker::SummarizeGraph(g->kg);
    *out = Dup(json ? tinker::GraphSummaryToJsonl(s) : tinker::FormatGraphSummary(s));
  });
}

tinker_status tinker_graph_infer(tinker_context* ctx, const tinker_graph* g,
                                 const char* rules_path, tinker_graph** out,
                                 size_t* iterations, size_t* added, char** warnings) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(g, "graph");
    Require(out, "out");
    auto rules = tinker::DefaultRules(g->kg.schema());
    if (rules_path) {
      rules = tinker::LoadRules(tinker::text::ReadFile(rules_path), g->kg.schema(),
                                ctx->aliases, std::move(rules));
    }
    auto result = tinker::ApplyRulesFixpoint(g->kg, rules);
    if (iterations) *iterations = result.iterations;
    if (added) *added = result.added;
    if (warnings) {
      std::string w;
      for (const auto& line : result.warnings) w += line + '\n';
      *warnings = Dup(w);
    }
    *out = new tinker_graph{std::move(result.graph)};
  });
}

tinker_status tinker_graph_query(tinker_context* ctx, const tinker_graph* g,
                                 const char* query, int include_inferred, int header,
                                 char** tsv, size_t* rows) {
  return Guard([&] {
    Require(ctx, "ctx");
    Require(g, "graph");
    Require(query, "query");
    Require(tsv, "tsv");
    const auto q = tinker::ParseQuery(query);
    const auto projected = tinker::Project(
        tinker::Evaluate(g->kg, q, include_inferred != 0, ctx->aliases), q.select);
    std::string text;
    auto line = [&](const std::vector<std::string>& cells, bool vars) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text += '\t';
        if (vars) text += '?';
        text += cells[i];
      }
      text += '\n';
    };
    if (header) line(q.select, true);
    for (const auto& r : projected) line(r, false);
    if (rows) *rows = projected.size();
    *tsv = Dup(text);
  });
}

tinker_status tinker_graph_cq_missing(const tinker_graph* g, const char* entity_id,
                                      int include_inferred, char** out) {
  return Guard([&] {
    Require(g, "graph");
    Require(entity_id, "entity_id");
    Require(out, "out");
    std::string text;
    for (const auto& p : tinker::CqMissingInfo(g->kg, entity_id, include_inferred != 0)) {
      text += p + '\n';
    }
    *out = Dup(text);
  });
}

tinker_status tinker_graph_cq_shared(const tinker_graph* g, size_t k, int include_inferred,
                                     char** out) {
  return Guard([&] {
    Require(g, "graph");
    Require(out, "out");
    std::string text;
    for (const auto& sf : tinker::CqSharedFeatures(g->kg, k, include_inferred != 0)) {
      text += sf.a + '\t' + sf.b + '\t' + std::to_string(sf.shared.size()) + '\t';
      bool first = true;
      for (const auto& [rel, n] : sf.shared) {
        if (!first) text += ',';
        first = false;
        text += rel + ':' + n;
      }
      text += '\n';
    }
    *out = Dup(text);
  });
}

tinker_status tinker_graph_cq_impact(const tinker_graph* g, const char* entity_id,
                                     int include_inferred, const char* format, char** out) {
  return Guard([&] {
    Require(g, "graph");
    Require(entity_id, "entity_id");
    Require(out, "out");
    const auto sub = tinker::CqImpact(g->kg, entity_id, include_inferred != 0);
    *out = Dup(Export(sub, format ? format : "nt"));
  });
}

tinker_status tinker_graph_export(const tinker_graph* g, const char* format, char** out) {
  return Guard([&] {
    Require(g, "graph");
    Require(format, "format");
    Require(out, "out");
    *out = Dup(Export(g->kg, format));
  });
}

tinker_status tinker_graph_explain(const tinker_graph* g, const char* head,
                                   const char* relation, const char* tail, char** out) {
  return Guard([&] {
    Require(g, "graph");
    Require(head, "head");
    Require(relation, "relation");
    Require(tail, "tail");
    Require(out, "out");
    *out = Dup(tinker::FormatDerivation(tinker::Explain(g->kg, {head, relation, tail})));
  });
}

}  // extern "C"
