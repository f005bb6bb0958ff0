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

#include "factpipe/cli/commands.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>

#include "factpipe/common/log.h"
#include "factpipe/common/parallel.h"
#include "factpipe/corpus/claims.h"
#include "factpipe/docretrieval/mentions.h"
#include "factpipe/docretrieval/retriever.h"
#include "factpipe/docretrieval/search.h"
#include "factpipe/rte/rte.h"
#include "factpipe/sentsel/ranker.h"

namespace factpipe::cli {

namespace {

void require(const fs::path& path) {
  if (path.empty() || !fs::exists(path)) throw MissingInputError(path);
}

}  // namespace

corpus::ArticleStore open_store(const PipelineConfig& config) {
  require(config.wiki_dir);
  corpus::IngestStats stats;
  return corpus::ArticleStore::open_or_build(config.wiki_dir, config.resolved_store_dir(), &stats);
}

std::vector<corpus::Claim> read_claims(const fs::path& path) {
  require(path);
  auto set = corpus::load_claims(path);
  for (const auto& msg : set.rejected) log::warn("rejected claim record ", msg);
  return std::move(set.claims);
}

std::vector<Record> retrieve_records(const PipelineConfig& config, const corpus::ArticleStore& store,
                                     const std::vector<corpus::Claim>& claims) {
  docretrieval::RuleChunker chunker;
  std::optional<docretrieval::PrecomputedParses> precomputed;
  if (!config.parses_file.empty()) {
    require(config.parses_file);
    precomputed = docretrieval::PrecomputedParses::load(config.parses_file, &chunker);
  }
  const docretrieval::ParseProvider& parser =
      precomputed ? static_cast<const docretrieval::ParseProvider&>(*precomputed) : chunker;

  std::unique_ptr<docretrieval::MediaWikiSearch> remote;
  if (config.remote) {
    if (docretrieval::offline_mode()) {
      log::warn("remote search requested but FACTPIPE_OFFLINE is set; using local title search");
    } else {
      remote = std::make_unique<docretrieval::MediaWikiSearch>(config.mediawiki);
    }
  }
  docretrieval::RetrievalOptions options;
  options.k = config.k;
  options.remote = remote.get();

  std::vector<Record> out(claims.size());
  parallel_for(claims.size(), config.jobs, [&](std::size_t i) {
    const auto& claim = claims[i];
    Record r;
    r["id"] = claim.id;
    r["claim"] = claim.text;
    r["predicted_pages"] = docretrieval::retrieve_documents(store, claim, parser, options);
    out[i] = std::move(r);
  });
  return out;
}

void run_ingest(const PipelineConfig& config) {
  require(config.wiki_dir);
  corpus::IngestStats stats;
  auto store = corpus::ArticleStore::open_or_build(config.wiki_dir, config.resolved_store_dir(), &stats);
  log::info("store ", config.resolved_store_dir(), ": ", store.size(), " articles");
}

void run_retrieve(const PipelineConfig& config, const fs::path& claims_path, const fs::path& out) {
  const auto claims = read_claims(claims_path);
  const auto store = open_store(config);
  write_jsonl(out, retrieve_records(config, store, claims));
  log::info("retrieve: wrote ", claims.size(), " records to ", out.string());
}

std::string ranker_file_name(std::uint64_t seed) { return "ranker-seed" + std::to_string(seed) + ".params"; }

void run_train_ranker(const PipelineConfig& config, const fs::path& claims_path,
                      const std::vector<std::uint64_t>& seeds, const fs::path& out_dir) {
  const auto claims = read_claims(claims_path);
  const auto store = open_store(config);
  const auto lex = build_lexicon(config);
  fs::create_directories(out_dir);
  parallel_for(seeds.size(), config.jobs, [&](std::size_t i) {
    sentsel::TrainLog tl;
    auto model = sentsel::train_ranker(claims, store, lex, config.ranker, seeds[i], &tl);
    model.save(out_dir / ranker_file_name(seeds[i]));
    log::info("ranker seed ", seeds[i], ": ", tl.steps, " steps, final epoch loss ",
              tl.epoch_loss.empty() ? 0.0 : tl.epoch_loss.back());
  });
}

namespace {

std::vector<sentsel::RankerModel> load_rankers(const fs::path& dir) {
  require(dir);
  static const std::regex kName(R"(ranker-seed(\d+)\.params)");
  std::vector<std::pair<std::uint64_t, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, kName)) files.emplace_back(std::stoull(m[1].str()), entry.path());
  }
  if (files.empty()) throw NotFoundError("no ranker-seed<N>.params files in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<sentsel::RankerModel> models;
  for (const auto& [seed, path] : files) models.push_back(sentsel::RankerModel::load(path));
  return models;
}

}  // namespace

void run_select(const PipelineConfig& config, const fs::path& models_dir, const fs::path& retrieved,
                const fs::path& out) {
  require(retrieved);
  auto records = read_jsonl(retrieved);
  const auto store = open_store(config);
  const auto lex = build_lexicon(config);
  const auto models = load_rankers(models_dir);
  std::vector<const sentsel::RankerModel*> ptrs;
  for (const auto& m : models) {
    if (m.embedding_dim() != lex.dim()) {
      throw ShapeError("ranker expects " + std::to_string(m.embedding_dim()) + "-dimensional embeddings, lexicon has " +
                       std::to_string(lex.dim()));
    }
    ptrs.push_back(&m);
  }
  parallel_for(records.size(), config.jobs, [&](std::size_t i) {
    Record& r = records[i];
    if (!r.contains("claim") || !r["claim"].is_string()) throw FormatError("retrieved record without claim text");
    const auto pred = to_prediction(r);
    const auto sentences = sentsel::candidate_sentences(store, pred.predicted_pages);
    const auto ranked = sentsel::score_sentences(ptrs, lex, r["claim"].get<std::string>(), sentences);
    const auto top = sentsel::select_top5(ranked);
    Record scores = Record::array();
    for (std::size_t k = 0; k < top.size(); ++k) scores.push_back(ranked[k].score);
    r["predicted_evidence"] = evidence_to_json(top);
    r["scores"] = std::move(scores);
  });
  write_jsonl(out, records);
  log::info("select: wrote ", records.size(), " records to ", out.string());
}

void run_train_rte(const PipelineConfig& config, const fs::path& claims_path, const fs::path& selected_path,
                   const fs::path& out) {
  const auto claims = read_claims(claims_path);
  require(selected_path);
  const auto selected = selected_from_records(read_jsonl(selected_path));
  const auto store = open_store(config);
  const auto lex = build_lexicon(config);
  rte::RteTrainLog tl;
  auto model = rte::train_rte(claims, selected, store, lex, config.rte, config.rte_seed, &tl);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  model.save(out);
  if (!tl.epoch_loss.empty()) {
    log::info("rte: final epoch loss ", tl.epoch_loss.back(), ", training accuracy ", tl.epoch_accuracy.back());
  }
}

void run_classify(const PipelineConfig& config, const fs::path& model_path, const fs::path& selected_path,
                  const fs::path& out) {
  require(model_path);
  require(selected_path);
  auto records = read_jsonl(selected_path);
  const auto model = rte::RteModel::load(model_path);
  const auto store = open_store(config);
  const auto lex = build_lexicon(config);
  if (model.embedding_dim() != lex.dim()) {
    throw ShapeError("entailment model expects " + std::to_string(model.embedding_dim()) +
                     "-dimensional embeddings, lexicon has " + std::to_string(lex.dim()));
  }
  parallel_for(records.size(), config.jobs, [&](std::size_t i) {
    Record& r = records[i];
    if (!r.contains("claim") || !r["claim"].is_string()) throw FormatError("selected record without claim text");
    const auto pred = to_prediction(r);
    corpus::Claim claim;
    claim.id = pred.claim_id;
    claim.text = r["claim"].get<std::string>();
    const auto verdict = rte::predict(model, claim, pred.predicted_evidence, store, lex, config.rte.sentences);
    r["predicted_label"] = std::string(corpus::label_to_string(verdict.label));
    r["logits"] = verdict.logits;
    r["attention_weights"] = verdict.attention_weights;
  });
  write_jsonl(out, records);
  log::info("classify: wrote ", records.size(), " records to ", out.string());
}

eval::MetricsReport run_evaluate(const fs::path& gold, const fs::path& pred, std::size_t sentences_used) {
  const auto claims = read_claims(gold);
  require(pred);
  std::vector<eval::PredictionRecord> preds;
  for (const auto& r : read_jsonl(pred)) preds.push_back(to_prediction(r));
  auto report = eval::evaluate(preds, claims);
  report.sentences_used = sentences_used;
  return report;
}

namespace {

struct PipelineStage {
  std::string name;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::function<void()> run;
};

fs::file_time_type newest(const std::vector<fs::path>& paths) {
  fs::file_time_type t = fs::file_time_type::min();
  for (const auto& p : paths) {
    if (!fs::exists(p)) continue;
    if (fs::is_directory(p)) {
      for (const auto& e : fs::recursive_directory_iterator(p)) t = std::max(t, e.last_write_time());
    } else {
      t = std::max(t, fs::last_write_time(p));
    }
  }
  return t;
}

bool up_to_date(const PipelineStage& stage) {
  if (stage.outputs.empty()) return false;
  fs::file_time_type oldest = fs::file_time_type::max();
  for (const auto& out : stage.outputs) {
    if (!fs::exists(out)) return false;
    oldest = std::min(oldest, fs::last_write_time(out));
  }
  return oldest >= newest(stage.inputs);
}

std::string metrics_json(const eval::MetricsReport& r) {
  Record j;
  auto score = [](const eval::Score& s) {
    Record o;
    o["value"] = s.value();
    o["hits"] = s.hits;
    o["total"] = s.total;
    return o;
  };
  j["sentences"] = r.sentences_used;
  j["doc_accuracy"] = score(r.doc_accuracy);
  j["sentence_recall"] = score(r.sentence_recall);
  j["label_accuracy"] = score(r.label_accuracy);
  j["fever_score"] = score(r.fever_score);
  j["confusion"] = r.confusion;
  j["missing_predictions"] = r.missing_predictions;
  j["document_misses"] = r.document_misses;
  j["sentence_misses"] = r.sentence_misses;
  j["label_errors"] = r.label_errors;
  return j.dump(2) + "\n";
}

}  // namespace

eval::MetricsReport run_pipeline(const PipelineConfig& config, const PipelineOptions& options) {
  config.validate();
  require(config.claims);
  require(config.resolved_train_claims());
  require(config.wiki_dir);

  const fs::path work = config.work_dir;
  fs::create_directories(work);
  log::set_file((work / "pipeline.log").string());
  struct LogCloser {
    ~LogCloser() { log::set_file(""); }
  } closer;

  const fs::path config_copy = work / "config.effective";
  const std::string config_text = options.config_text.empty() ? config.to_text() : options.config_text;
  {
    std::ifstream in(config_copy);
    std::string existing((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!in || existing != config_text) write_text(config_copy, config_text);
  }

  const fs::path store_manifest = fs::path(config.resolved_store_dir()) / "MANIFEST";
  const fs::path models = work / "models";
  const fs::path retrieved = work / "retrieved.jsonl";
  const fs::path selected = work / "selected.jsonl";
  const fs::path rte_model = work / "rte.params";
  const fs::path labeled = work / "labeled.jsonl";
  const fs::path report_txt = work / "report.txt";
  const fs::path report_json = work / "metrics.json";
  const bool separate_train = config.resolved_train_claims() != config.claims;
  const fs::path train_retrieved = separate_train ? work / "train_retrieved.jsonl" : retrieved;
  const fs::path train_selected = separate_train ? work / "train_selected.jsonl" : selected;
  const auto seeds = config.ranker_seeds();
  std::vector<fs::path> model_files;
  for (auto s : seeds) model_files.push_back(models / ranker_file_name(s));

  eval::MetricsReport report;
  std::vector<PipelineStage> stages;
  stages.push_back({"ingest", {}, {}, [&] { run_ingest(config); }});
  stages.push_back({"retrieve", {config.claims, store_manifest, config_copy}, {retrieved},
                    [&] { run_retrieve(config, config.claims, retrieved); }});
  if (separate_train) {
    stages.push_back({"retrieve-train", {config.resolved_train_claims(), store_manifest, config_copy},
                      {train_retrieved},
                      [&] { run_retrieve(config, config.resolved_train_claims(), train_retrieved); }});
  }
  stages.push_back({"train-ranker", {config.resolved_train_claims(), store_manifest, config_copy}, model_files, [&] {
                      run_train_ranker(config, config.resolved_train_claims(), seeds, models);
                    }});
  stages.push_back({"select", {retrieved, models, config_copy}, {selected},
                    [&] { run_select(config, models, retrieved, selected); }});
  if (separate_train) {
    stages.push_back({"select-train", {train_retrieved, models, config_copy}, {train_selected},
                      [&] { run_select(config, models, train_retrieved, train_selected); }});
  }
  stages.push_back({"train-rte", {config.resolved_train_claims(), train_selected, config_copy}, {rte_model},
                    [&] { run_train_rte(config, config.resolved_train_claims(), train_selected, rte_model); }});
  stages.push_back({"classify", {rte_model, selected, config_copy}, {labeled},
                    [&] { run_classify(config, rte_model, selected, labeled); }});
  stages.push_back({"evaluate", {config.claims, labeled, config_copy}, {report_txt, report_json}, [&] {
                      report = run_evaluate(config.claims, labeled, config.rte.sentences);
                      write_text(report_txt, eval::format_report(report));
                      write_text(report_json, metrics_json(report));
                    }});

  for (const auto& stage : stages) {
    if (!options.force && stage.name != "evaluate" && up_to_date(stage)) {
      log::info("stage ", stage.name, ": up to date, skipped");
      continue;
    }
    log::info("stage ", stage.name, ": running");
    try {
      stage.run();
    } catch (const MissingInputError&) {
      throw;
    } catch (const std::exception& e) {
      log::error("stage ", stage.name, " failed: ", e.what());
      throw StageError(stage.name, e.what());
    }
  }
  return report;
}

}  // namespace factpipe::cli
