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

// tinker: command-line front end. Talks to the library only through the C API.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "tinker/tinker.h"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Data violations exit 1; I/O and argument problems exit 2.
int ExitFor(tinker_status s) {
  if (s == TINKER_OK) return 0;
  if (s == TINKER_E_IO || s == TINKER_E_INVALID_ARGUMENT || s == TINKER_E_INTERNAL) {
    return kExitUsage;
  }
  return kExitData;
}

struct Failure {
  int code;
};

void Check(tinker_status s) {
  if (s == TINKER_OK) return;
  std::cerr << "tinker: " << tinker_last_error() << '\n';
  throw Failure{ExitFor(s)};
}

// Owns a string returned by the C API.
struct CStr {
  char* p = nullptr;
  ~CStr() { tinker_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

struct Graph {
  tinker_graph* g = nullptr;
  ~Graph() { tinker_graph_free(g); }
};

struct Context {
  tinker_context* ctx = nullptr;
  Context() { Check(tinker_context_new(&ctx)); }
  ~Context() { tinker_context_free(ctx); }
};

void WriteOut(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << data;
  if (!f) {
    std::cerr << "tinker: cannot write " << path << '\n';
    throw Failure{kExitUsage};
  }
}

std::map<std::string, std::string> ReadConfig(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "tinker: cannot read config " << path << '\n';
    throw Failure{kExitUsage};
  }
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(f, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "tinker: " << path << ":" << n << ": expected key=value\n";
      throw Failure{kExitUsage};
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

struct Globals {
  std::string schema;
  std::string ns;
  std::string aliases;
  unsigned workers = 1;
  std::string config;
  std::string ioc_patterns;
  bool iocs = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, query and reason over threat-report knowledge graphs."};
  app.set_version_flag("--version", std::string(tinker_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* o_schema = app.add_option("--schema", g.schema, "Schema file, or 'default'");
  auto* o_ns = app.add_option("--namespace", g.ns, "Base namespace URI");
  auto* o_aliases = app.add_option("--aliases", g.aliases, "Alias table (TSV)");
  auto* o_workers =
      app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--config", g.config, "Config file of key=value lines (default ./tinker.conf)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check annotations against the schema");
  std::string dir;
  validate->add_option("dir", dir, "Corpus directory")->required();

  // build
  auto* build = app.add_subcommand("build", "Build a graph from an annotated corpus");
  std::string out = "graph.nt";
  build->add_option("dir", dir, "Corpus directory")->required();
  build->add_option("-o,--output", out, "Output .nt file (sidecars written beside it)");
  auto* o_iocs = build->add_flag("--iocs", g.iocs, "Add extracted indicators as entities");
  auto* o_patterns =
      build->add_option("--ioc-patterns", g.ioc_patterns, "Indicator pattern overrides");

  // infer
  auto* infer = app.add_subcommand("infer", "Apply inference rules to a graph");
  std::string graph;
  std::string rules;
  infer->add_option("-g,--graph", graph, "Input .nt file")->required();
  infer->add_option("--rules", rules, "Rules file");
  infer->add_option("-o,--output", out, "Output .nt file")->required();

  // query
  auto* query = app.add_subcommand("query", "Run a basic graph pattern query");
  std::string q;
  bool header = false;
  bool asserted_only = false;
  query->add_option("-g,--graph", graph, "Graph .nt file")->required();
  query->add_option("query", q, "Query text")->required();
  query->add_flag("--header", header, "Print the selected variables first");
  query->add_flag("--asserted-only", asserted_only, "Ignore inferred triples");

  // cq
  auto* cq = app.add_subcommand("cq", "Competency question templates");
  cq->require_subcommand(1);
  std::string entity;
  std::string format = "nt";
  std::size_t k = 1;
  auto* cq_missing = cq->add_subcommand("missing", "Expected properties the entity lacks");
  cq_missing->add_option("-g,--graph", graph)->required();
  cq_missing->add_option("entity", entity, "Entity id")->required();
  cq_missing->add_flag("--asserted-only", asserted_only);
  auto* cq_shared = cq->add_subcommand("shared", "Same-class pairs with shared features");
  cq_shared->add_option("-g,--graph", graph)->required();
  cq_shared->add_option("-k", k, "Minimum shared features")->check(CLI::PositiveNumber);
  cq_shared->add_flag("--asserted-only", asserted_only);
  auto* cq_impact = cq->add_subcommand("impact", "Impact subgraph of a malware entity");
  cq_impact->add_option("-g,--graph", graph)->required();
  cq_impact->add_option("entity", entity, "Entity id")->required();
  cq_impact->add_option("--format", format)->check(CLI::IsMember({"nt", "ttl", "dot", "graphml"}));
  cq_impact->add_flag("--asserted-only", asserted_only);

  // iocs
  auto* iocs = app.add_subcommand("iocs", "Extract indicators of compromise");
  bool json = false;
  iocs->add_option("dir", dir, "Corpus directory")->required();
  iocs->add_flag("--json", json, "Line-delimited JSON output");
  auto* o_patterns2 =
      iocs->add_option("--ioc-patterns", g.ioc_patterns, "Indicator pattern overrides");

  // stats
  auto* stats = app.add_subcommand("stats", "Class distribution and coverage, or graph summary");
  double threshold = 0.95;
  stats->add_option("dir", dir, "Corpus directory");
  stats->add_option("-g,--graph", graph, "Summarize a graph instead of a corpus");
  stats->add_flag("--json", json, "Line-delimited JSON output");
  auto* o_threshold = stats->add_option("--threshold", threshold, "Coverage threshold in (0,1]");
  auto* o_iocs2 = stats->add_flag("--iocs", g.iocs, "Count extracted indicators too");

  // export
  auto* exp = app.add_subcommand("export", "Export a graph");
  exp->add_option("-g,--graph", graph)->required();
  exp->add_option("--format", format)
      ->required()
      ->check(CLI::IsMember({"nt", "ttl", "dot", "graphml"}));
  std::string exp_out;
  exp->add_option("-o,--output", exp_out, "Output file (stdout by default)");

  // explain
  auto* explain = app.add_subcommand("explain", "Show how a triple was derived");
  std::string head, relation, tail;
  explain->add_option("-g,--graph", graph)->required();
  explain->add_option("head", head)->required();
  explain->add_option("relation", relation)->required();
  explain->add_option("tail", tail)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    // Config supplies defaults for flags not given on the command line.
    std::string config_path = g.config;
    if (config_path.empty() && std::filesystem::exists("tinker.conf")) config_path = "tinker.conf";
    if (!config_path.empty()) {
      for (const auto& [key, value] : ReadConfig(config_path)) {
        if (key == "schema" && !o_schema->count()) g.schema = value;
        else if (key == "namespace" && !o_ns->count()) g.ns = value;
        else if (key == "aliases" && !o_aliases->count()) g.aliases = value;
        else if (key == "workers" && !o_workers->count()) g.workers = static_cast<unsigned>(std::stoul(value));
        else if (key == "iocs" && !o_iocs->count() && !o_iocs2->count()) g.iocs = value == "true" || value == "1";
        else if (key == "ioc_patterns" && !o_patterns->count() && !o_patterns2->count()) g.ioc_patterns = value;
        else if (key == "threshold" && !o_threshold->count()) threshold = std::stod(value);
        else if (key != "schema" && key != "namespace" && key != "aliases" && key != "workers" &&
                 key != "iocs" && key != "ioc_patterns" && key != "threshold") {
          std::cerr << "tinker: unknown config key '" << key << "'\n";
          return kExitUsage;
        }
      }
    }

    Context c;
    if (!g.schema.empty()) Check(tinker_context_set_schema_file(c.ctx, g.schema.c_str()));
    if (!g.ns.empty()) Check(tinker_context_set_namespace(c.ctx, g.ns.c_str()));
    if (!g.aliases.empty()) Check(tinker_context_set_aliases_file(c.ctx, g.aliases.c_str()));
    Check(tinker_context_set_workers(c.ctx, g.workers));
    Check(tinker_context_set_include_iocs(c.ctx, g.iocs ? 1 : 0));
    if (!g.ioc_patterns.empty()) {
      Check(tinker_context_set_ioc_patterns_file(c.ctx, g.ioc_patterns.c_str()));
    }

    auto load = [&](Graph& gr) { Check(tinker_graph_load(c.ctx, graph.c_str(), &gr.g)); };

    if (*validate) {
      CStr report;
      int ok = 0;
      Check(tinker_validate_corpus(c.ctx, dir.c_str(), report.out(), &ok));
      std::cout << report.str();
      return ok ? 0 : kExitData;
    }
    if (*build) {
      Graph gr;
      Check(tinker_build_corpus(c.ctx, dir.c_str(), &gr.g));
      Check(tinker_graph_save(gr.g, out.c_str()));
      CStr summary;
      Check(tinker_graph_summary(gr.g, 0, summary.out()));
      std::cout << summary.str();
      return 0;
    }
    if (*infer) {
      Graph in, result;
      load(in);
      std::size_t iterations = 0, added = 0;
      CStr warnings;
      Check(tinker_graph_infer(c.ctx, in.g, rules.empty() ? nullptr : rules.c_str(), &result.g,
                               &iterations, &added, warnings.out()));
      std::cerr << warnings.str();
      Check(tinker_graph_save(result.g, out.c_str()));
      std::cout << "added\t" << added << "\niterations\t" << iterations << '\n';
      return 0;
    }
    if (*query) {
      Graph gr;
      load(gr);
      CStr rows;
      Check(tinker_graph_query(c.ctx, gr.g, q.c_str(), asserted_only ? 0 : 1, header ? 1 : 0,
                               rows.out(), nullptr));
      std::cout << rows.str();
      return 0;
    }
    if (*cq) {
      Graph gr;
      load(gr);
      CStr result;
      const int inc = asserted_only ? 0 : 1;
      if (*cq_missing) Check(tinker_graph_cq_missing(gr.g, entity.c_str(), inc, result.out()));
      if (*cq_shared) Check(tinker_graph_cq_shared(gr.g, k, inc, result.out()));
      if (*cq_impact) {
        Check(tinker_graph_cq_impact(gr.g, entity.c_str(), inc, format.c_str(), result.out()));
      }
      std::cout << result.str();
      return 0;
    }
    if (*iocs) {
      CStr result;
      Check(tinker_extract_iocs(c.ctx, dir.c_str(), json ? 1 : 0, result.out()));
      std::cout << result.str();
      return 0;
    }
    if (*stats) {
      CStr result;
      if (!graph.empty()) {
        Graph gr;
        load(gr);
        Check(tinker_graph_summary(gr.g, json ? 1 : 0, result.out()));
      } else if (!dir.empty()) {
        Check(tinker_corpus_stats(c.ctx, dir.c_str(), threshold, json ? 1 : 0, result.out()));
      } else {
        std::cerr << "tinker: stats needs a corpus directory or --graph\n";
        return kExitUsage;
      }
      std::cout << result.str();
      return 0;
    }
    if (*exp) {
      Graph gr;
      load(gr);
      CStr result;
      Check(tinker_graph_export(gr.g, format.c_str(), result.out()));
      WriteOut(exp_out, result.str());
      return 0;
    }
    if (*explain) {
      Graph gr;
      load(gr);
      CStr result;
      Check(tinker_graph_explain(gr.g, head.c_str(), relation.c_str(), tail.c_str(),
                                 result.out()));
      std::cout << result.str();
      return 0;
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "tinker: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
