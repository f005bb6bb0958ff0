// Copyright 2026 The factpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include "CLI11.hpp"
#include "factpipe/cli/commands.h"
#include "factpipe/common/log.h"

namespace factpipe::cli {
namespace {

struct GlobalFlags {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string wiki_dir;
  std::string store_dir;
  std::string embeddings_first;
  std::string embeddings_second;
  std::size_t first_dim = 0;
  std::size_t second_dim = 0;
  std::size_t synthetic = 0;
  std::size_t jobs = 0;
  bool verbose = false;
  bool quiet = false;
};

void add_global_flags(CLI::App& app, GlobalFlags& g) {
  app.add_option("--config", g.config_file, "key = value configuration file");
  app.add_option("--set", g.overrides, "override one configuration key (key=value); repeatable");
  app.add_option("--wiki-dir", g.wiki_dir, "article dump file or directory of *.jsonl");
  app.add_option("--store-dir", g.store_dir, "indexed store directory (default <wiki-dir>.store)");
  app.add_option("--embeddings-first,--glove-file", g.embeddings_first, "first embedding table (text format)");
  app.add_option("--embeddings-second,--fasttext-file", g.embeddings_second, "second embedding table (text format)");
  app.add_option("--first-dim", g.first_dim, "width of the first embedding table");
  app.add_option("--second-dim", g.second_dim, "width of the second embedding table");
  app.add_option("--synthetic-embeddings", g.synthetic, "synthetic table width for tables without a path");
  app.add_option("--jobs", g.jobs, "worker threads");
  app.add_flag("-v,--verbose", g.verbose, "debug logging");
  app.add_flag("-q,--quiet", g.quiet, "warnings and errors only");
}

PipelineConfig resolve_config(const GlobalFlags& g) {
  PipelineConfig c;
  if (!g.config_file.empty()) load_config_file(g.config_file, c);
  if (!g.wiki_dir.empty()) c.wiki_dir = g.wiki_dir;
  if (!g.store_dir.empty()) c.store_dir = g.store_dir;
  if (!g.embeddings_first.empty()) c.embeddings_first = g.embeddings_first;
  if (!g.embeddings_second.empty()) c.embeddings_second = g.embeddings_second;
  if (g.first_dim) c.embeddings_first_dim = g.first_dim;
  if (g.second_dim) c.embeddings_second_dim = g.second_dim;
  if (g.synthetic) c.synthetic_embeddings = g.synthetic;
  if (g.jobs) c.jobs = g.jobs;
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"factpipe: claim verification pipeline"};
  app.require_subcommand(1);
  GlobalFlags g;
  add_global_flags(app, g);

  auto* ingest = app.add_subcommand("ingest", "build the indexed article store");
  ingest->fallthrough();

  std::string claims_file, out, parses_file, endpoint;
  std::size_t k = 0;
  bool remote = false;
  auto* retrieve = app.add_subcommand("retrieve", "document retrieval");
  retrieve->fallthrough();
  retrieve->add_option("--claims-file,--claims", claims_file, "claims JSONL")->required();
  retrieve->add_option("--k", k, "search results per mention (default 7)");
  retrieve->add_flag("--remote", remote, "use the MediaWiki search API");
  retrieve->add_option("--endpoint", endpoint, "MediaWiki api.php URL");
  retrieve->add_option("--parses-file", parses_file, "precomputed noun phrases per claim id");
  retrieve->add_option("--out", out, "output JSONL")->required();

  std::string seeds_text, out_dir;
  auto* train_ranker = app.add_subcommand("train-ranker", "train sentence ranking models");
  train_ranker->fallthrough();
  train_ranker->add_option("--claims", claims_file, "training claims JSONL")->required();
  train_ranker->add_option("--seeds", seeds_text, "seed range a..b or list a,b,c (default from config)");
  train_ranker->add_option("--out-dir", out_dir, "model directory")->required();

  std::string models_dir, retrieved;
  auto* select = app.add_subcommand("select", "rank sentences and keep the top five");
  select->fallthrough();
  select->add_option("--models", models_dir, "directory of ranker-seed<N>.params")->required();
  select->add_option("--retrieved", retrieved, "retrieve output")->required();
  select->add_option("--out", out, "output JSONL")->required();

  std::string selected;
  auto* train_rte = app.add_subcommand("train-rte", "train the entailment classifier");
  train_rte->fallthrough();
  train_rte->add_option("--claims", claims_file, "labeled claims JSONL")->required();
  train_rte->add_option("--selected", selected, "select output for the same claims")->required();
  train_rte->add_option("--out", out, "model file")->required();

  std::string model;
  std::size_t sentences = 0;
  auto* classify = app.add_subcommand("classify", "predict labels");
  classify->fallthrough();
  classify->add_option("--model", model, "entailment model file")->required();
  classify->add_option("--selected", selected, "select output")->required();
  classify->add_option("--sentences", sentences, "sentences per claim, 1 to 5");
  classify->add_option("--out", out, "output JSONL")->required();

  std::string gold, pred, stage = "all";
  auto* evaluate = app.add_subcommand("evaluate", "score predictions");
  evaluate->fallthrough();
  evaluate->add_option("--gold", gold, "gold claims JSONL")->required();
  evaluate->add_option("--pred", pred, "prediction JSONL")->required();
  evaluate->add_option("--stage", stage, "doc, sent, label, fever or all");
  evaluate->add_option("--out", out, "also write the report here");

  bool force = false;
  auto* pipeline = app.add_subcommand("pipeline", "run every stage");
  pipeline->fallthrough();
  pipeline->add_flag("--force", force, "rerun stages whose outputs are up to date");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  log::set_level(g.verbose ? log::Level::kDebug : g.quiet ? log::Level::kWarning : log::Level::kInfo);
  try {
    PipelineConfig config = resolve_config(g);
    if (k) config.k = k;
    if (remote) config.remote = true;
    if (!endpoint.empty()) config.mediawiki.endpoint = endpoint;
    if (!parses_file.empty()) config.parses_file = parses_file;
    if (sentences) config.rte.sentences = sentences;
    config.validate();

    if (*ingest) {
      run_ingest(config);
    } else if (*retrieve) {
      run_retrieve(config, claims_file, out);
    } else if (*train_ranker) {
      const auto seeds = seeds_text.empty() ? config.ranker_seeds() : parse_seed_list(seeds_text);
      run_train_ranker(config, claims_file, seeds, out_dir);
    } else if (*select) {
      run_select(config, models_dir, retrieved, out);
    } else if (*train_rte) {
      run_train_rte(config, claims_file, selected, out);
    } else if (*classify) {
      run_classify(config, model, selected, out);
    } else if (*evaluate) {
      const auto st = eval::stage_from_string(stage);
      if (!st) throw Error("--stage must be doc, sent, label, fever or all");
      const auto report = eval::format_report(run_evaluate(gold, pred, config.rte.sentences), *st);
      std::cout << report;
      if (!out.empty()) write_text(out, report);
    } else if (*pipeline) {
      if (g.config_file.empty() && config.claims.empty()) throw Error("pipeline needs --config or --set claims=...");
      PipelineOptions opts;
      opts.force = force;
      std::cout << eval::format_report(run_pipeline(config, opts));
    }
  } catch (const MissingInputError& e) {
    std::cerr << "factpipe: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "factpipe: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace factpipe::cli
