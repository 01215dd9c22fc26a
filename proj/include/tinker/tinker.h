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

/* C interface to the tinker knowledge-graph library.
 *
 * Every call returns a tinker_status; on failure tinker_last_error() holds a
 * message for the calling thread until its next call. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * tinker_string_free(). */
#ifndef TINKER_TINKER_H_
#define TINKER_TINKER_H_

#include <stddef.h>

#if defined(_WIN32)
#define TINKER_API __declspec(dllexport)
#else
#define TINKER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tinker_status {
  TINKER_OK = 0,
  TINKER_E_SYNTAX = 1,
  TINKER_E_VALIDATION = 2,
  TINKER_E_UNKNOWN_CLASS = 3,
  TINKER_E_UNKNOWN_PROPERTY = 4,
  TINKER_E_UNKNOWN_ENTITY = 5,
  TINKER_E_UNKNOWN_TRIPLE = 6,
  TINKER_E_EMPTY_DOCUMENT = 7,
  TINKER_E_ENCODING = 8,
  TINKER_E_OFFSET_MISMATCH = 9,
  TINKER_E_DANGLING_ARG = 10,
  TINKER_E_DOMAIN_RANGE = 11,
  TINKER_E_SCHEMA_MISMATCH = 12,
  TINKER_E_FOREIGN_NAMESPACE = 13,
  TINKER_E_INVALID_RULE = 14,
  TINKER_E_EMPTY_LABEL = 15,
  TINKER_E_NO_EXPECTATION = 16,
  TINKER_E_EMPTY_DISTRIBUTION = 17,
  TINKER_E_IO = 18,
  TINKER_E_INVALID_ARGUMENT = 19,
  TINKER_E_INTERNAL = 100
} tinker_status;

typedef struct tinker_context tinker_context;
typedef struct tinker_graph tinker_graph;

TINKER_API const char* tinker_version(void);
TINKER_API const char* tinker_status_name(tinker_status status);
TINKER_API const char* tinker_last_error(void);
TINKER_API void tinker_string_free(char* s);

/* Context: schema, namespace, aliases and corpus settings. */
TINKER_API tinker_status tinker_context_new(tinker_context** out);
TINKER_API void tinker_context_free(tinker_context* ctx);
/* "default" selects the built-in schema. */
TINKER_API tinker_status tinker_context_set_schema_file(tinker_context* ctx, const char* path);
TINKER_API tinker_status tinker_context_set_schema_text(tinker_context* ctx, const char* text);
TINKER_API tinker_status tinker_context_set_namespace(tinker_context* ctx, const char* uri);
TINKER_API tinker_status tinker_context_set_aliases_file(tinker_context* ctx, const char* path);
TINKER_API tinker_status tinker_context_set_workers(tinker_context* ctx, unsigned workers);
TINKER_API tinker_status tinker_context_set_include_iocs(tinker_context* ctx, int enabled);
TINKER_API tinker_status tinker_context_set_ioc_patterns_file(tinker_context* ctx,
                                                              const char* path);

/* Corpus operations over a directory of .txt/.ann files. */
TINKER_API tinker_status tinker_validate_corpus(tinker_context* ctx, const char* dir,
                                                char** report_jsonl, int* ok);
TINKER_API tinker_status tinker_build_corpus(tinker_context* ctx, const char* dir,
                                             tinker_graph** out);
/* One TSV line per match: docId, kind, start, end, normalized (or JSONL). */
TINKER_API tinker_status tinker_extract_iocs(tinker_context* ctx, const char* dir, int json,
                                             char** out);
TINKER_API tinker_status tinker_corpus_stats(tinker_context* ctx, const char* dir,
                                             double threshold, int json, char** out);

/* Graph files: <name>.nt plus .prov.jsonl and .entities.jsonl sidecars. */
TINKER_API tinker_status tinker_graph_load(tinker_context* ctx, const char* path,
                                           tinker_graph** out);
TINKER_API tinker_status tinker_graph_save(const tinker_graph* g, const char* path);
TINKER_API void tinker_graph_free(tinker_graph* g);
TINKER_API size_t tinker_graph_entity_count(const tinker_graph* g);
TINKER_API size_t tinker_graph_triple_count(const tinker_graph* g);

TINKER_API tinker_status tinker_graph_summary(const tinker_graph* g, int json, char** out);
/* rules_path may be NULL for the default rule set. warnings: one per line. */
TINKER_API tinker_status tinker_graph_infer(tinker_context* ctx, const tinker_graph* g,
                                            const char* rules_path, tinker_graph** out,
                                            size_t* iterations, size_t* added,
                                            char** warnings);
/* TSV rows of the selected variables. */
TINKER_API tinker_status tinker_graph_query(tinker_context* ctx, const tinker_graph* g,
                                            const char* query, int include_inferred,
                                            int header, char** tsv, size_t* rows);
TINKER_API tinker_status tinker_graph_cq_missing(const tinker_graph* g, const char* entity_id,
                                                 int include_inferred, char** out);
TINKER_API tinker_status tinker_graph_cq_shared(const tinker_graph* g, size_t k,
                                                int include_inferred, char** out);
/* format: "nt", "ttl", "dot" or "graphml". */
TINKER_API tinker_status tinker_graph_cq_impact(const tinker_graph* g, const char* entity_id,
                                                int include_inferred, const char* format,
                                                char** out);
TINKER_API tinker_status tinker_graph_export(const tinker_graph* g, const char* format,
                                             char** out);
TINKER_API tinker_status tinker_graph_explain(const tinker_graph* g, const char* head,
                                              const char* relation, const char* tail,
                                              char** out);

#ifdef __cplusplus
}
#endif

#endif /* TINKER_TINKER_H_ */
