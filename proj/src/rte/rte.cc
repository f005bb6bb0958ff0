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

#include "factpipe/rte/rte.h"

#include <algorithm>
#include <set>

#include "factpipe/common/error.h"
#include "factpipe/common/log.h"
#include "factpipe/lexicon/tokenizer.h"
#include "factpipe/numerics/ops.h"

namespace factpipe::rte {

namespace ops = numerics;
using corpus::EvidenceRef;
using corpus::Label;

std::size_t label_index(Label label) {
  switch (label) {
    case Label::kSupported:
      return 0;
    case Label::kRefuted:
      return 1;
    case Label::kNotEnoughInfo:
      return 2;
  }
  return 2;
}

Label label_at(std::size_t index) {
  static const Label kLabels[kClasses] = {Label::kSupported, Label::kRefuted, Label::kNotEnoughInfo};
  if (index >= kClasses) throw Error("label index out of range: " + std::to_string(index));
  return kLabels[index];
}

Summaries summarize_statements(const std::vector<esim::PairEncoding>& runs) {
  numerics::Graph g;
  std::vector<esim::PairVars> vars;
  for (const auto& r : runs) {
    esim::PairVars v;
    v.claim_tokens = g.constant(r.claim_token_encodings);
    v.sentence_tokens = g.constant(r.sentence_token_encodings);
    vars.push_back(v);
  }
  SummaryVars sv = summarize_statements(vars);
  Summaries out;
  out.claim = sv.claim.value();
  for (const Var& s : sv.sentences) out.sentences.push_back(s.value());
  return out;
}

SummaryVars summarize_statements(const std::vector<esim::PairVars>& runs) {
  if (runs.empty() || runs.size() > kMaxSentences) {
    throw Error("summarize_statements: expected 1 to 5 runs, got " + std::to_string(runs.size()));
  }
  SummaryVars out;
  for (const auto& r : runs) {
    Var c = ops::sum_rows(r.claim_tokens);
    out.claim = out.claim.valid() ? ops::add(out.claim, c) : c;
    out.sentences.push_back(ops::sum_rows(r.sentence_tokens));
  }
  return out;
}

// Keeps the ReLU layers live when the pooled input is small.
constexpr double kHiddenBiasInit = 0.1;

RteModel RteModel::create(std::size_t embedding_dim, const RteConfig& config, std::uint64_t seed) {
  if (config.attention_dim == 0 || config.classifier_hidden1 == 0 || config.classifier_hidden2 == 0) {
    throw Error("rte: layer sizes must be at least 1");
  }
  RteModel model;
  model.params_ = numerics::ParamSet(seed);
  esim::EsimConfig ec;
  ec.embedding_dim = embedding_dim;
  ec.hidden = config.hidden;
  ec.identity_encoding = config.identity_encoding;
  ec.dropout = config.dropout;
  model.esim_ = esim::EsimParams::create(model.params_, "esim", ec);
  numerics::Linear::create(model.params_, "attention", model.esim_.encoding_dim(), config.attention_dim);
  numerics::Linear::create(model.params_, "classifier.1", 2 * model.esim_.final_dim(), config.classifier_hidden1);
  numerics::Linear::create(model.params_, "classifier.2", config.classifier_hidden1, config.classifier_hidden2);
  numerics::Linear::create(model.params_, "classifier.3", config.classifier_hidden2, kClasses);
  for (const char* hidden : {"classifier.1.b", "classifier.2.b"}) {
    Tensor& b = model.params_.mutable_value(hidden);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = kHiddenBiasInit;
  }
  model.bind_layers();
  return model;
}

void RteModel::bind_layers() {
  attention_ = numerics::Linear::bind(params_, "attention");
  classifier1_ = numerics::Linear::bind(params_, "classifier.1");
  classifier2_ = numerics::Linear::bind(params_, "classifier.2");
  classifier3_ = numerics::Linear::bind(params_, "classifier.3");
  if (attention_.in != esim_.encoding_dim() || classifier1_.in != 2 * esim_.final_dim() ||
      classifier2_.in != classifier1_.out || classifier3_.in != classifier2_.out || classifier3_.out != kClasses) {
    throw FormatError("rte: attention or classifier shapes do not match the encoder");
  }
}

RteModel RteModel::load(const std::filesystem::path& path) {
  RteModel model;
  model.params_ = numerics::ParamSet::load(path);
  model.esim_ = esim::EsimParams::bind(model.params_, "esim");
  model.bind_layers();
  return model;
}

void RteModel::save(const std::filesystem::path& path) const { params_.save(path); }

std::vector<Var> RteModel::attention_weights(numerics::Graph& g, Var claim_summary,
                                             const std::vector<Var>& sentence_summaries) const {
  if (sentence_summaries.empty()) throw Error("attention_weights: no sentence summaries");
  Var pc = ops::tanh(attention_(g, params_, claim_summary));
  std::vector<Var> out;
  for (const Var& s : sentence_summaries) out.push_back(ops::cosine(pc, ops::tanh(attention_(g, params_, s))));
  return out;
}

std::vector<double> RteModel::attention_weights(const Tensor& claim_summary,
                                                const std::vector<Tensor>& sentence_summaries) const {
  numerics::Graph g;
  std::vector<Var> sents;
  for (const auto& s : sentence_summaries) sents.push_back(g.constant(s));
  std::vector<double> out;
  for (const Var& w : attention_weights(g, g.constant(claim_summary), sents)) out.push_back(w.value().item());
  return out;
}

Var RteModel::classify(numerics::Graph& g, const std::vector<esim::PairVars>& runs, const std::vector<Var>& weights,
                       Rng* dropout_rng) const {
  if (runs.empty()) throw Error("aggregate_and_classify: no runs");
  if (runs.size() != weights.size()) throw ShapeError("aggregate_and_classify: one weight per run is required");
  std::vector<Var> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) rows.push_back(ops::scale_by(runs[i].final_hidden, weights[i]));
  Var pooled = numerics::pool_avg_max(ops::concat_rows(rows));
  const bool drop = dropout_rng && esim_.dropout > 0.0;
  Var h1 = ops::relu(classifier1_(g, params_, pooled));
  if (drop) h1 = ops::dropout(h1, esim_.dropout, *dropout_rng);
  Var h2 = ops::relu(classifier2_(g, params_, h1));
  if (drop) h2 = ops::dropout(h2, esim_.dropout, *dropout_rng);
  return classifier3_(g, params_, h2);
}

Var RteModel::logits(numerics::Graph& g, Var claim, const std::vector<Var>& sentences, std::vector<Var>* weights_out,
                     Rng* dropout_rng) const {
  if (sentences.empty() || sentences.size() > kMaxSentences) {
    throw Error("rte: expected 1 to 5 sentences, got " + std::to_string(sentences.size()));
  }
  std::vector<esim::PairVars> runs;
  for (const Var& s : sentences) runs.push_back(esim::encode_pair(g, params_, esim_, claim, s, dropout_rng));
  SummaryVars summaries = summarize_statements(runs);
  std::vector<Var> weights = attention_weights(g, summaries.claim, summaries.sentences);
  if (weights_out) *weights_out = weights;
  return classify(g, runs, weights, dropout_rng);
}

namespace {

Verdict make_verdict(Var logits, const std::vector<Var>& weights) {
  Verdict v;
  const Tensor& t = logits.value();
  std::size_t best = 0;
  for (std::size_t i = 0; i < kClasses; ++i) {
    v.logits[i] = t[i];
    if (t[i] > t[best]) best = i;
  }
  v.label = label_at(best);
  for (const Var& w : weights) v.attention_weights.push_back(w.value().item());
  return v;
}

}  // namespace

Verdict RteModel::aggregate_and_classify(const std::vector<esim::PairEncoding>& runs) const {
  if (runs.empty()) throw Error("aggregate_and_classify: no runs");
  numerics::Graph g;
  std::vector<esim::PairVars> vars;
  for (const auto& r : runs) {
    vars.push_back(esim::PairVars{g.constant(r.final_hidden), g.constant(r.claim_token_encodings),
                                  g.constant(r.sentence_token_encodings)});
  }
  SummaryVars summaries = summarize_statements(vars);
  std::vector<Var> weights = attention_weights(g, summaries.claim, summaries.sentences);
  return make_verdict(classify(g, vars, weights), weights);
}

Verdict RteModel::predict(const Tensor& claim_vecs, const std::vector<Tensor>& sentence_vecs) const {
  numerics::Graph g;
  std::vector<Var> sents;
  for (const auto& s : sentence_vecs) sents.push_back(g.constant(s));
  std::vector<Var> weights;
  Var out = logits(g, g.constant(claim_vecs), sents, &weights);
  return make_verdict(out, weights);
}

std::vector<std::string> build_rte_input(const corpus::Claim& claim, const std::vector<EvidenceRef>& selected,
                                         const corpus::ArticleStore& store, std::size_t limit) {
  if (limit == 0 || limit > kMaxSentences) throw Error("build_rte_input: limit must be 1 to 5");
  std::vector<std::string> out;
  for (const auto& ref : selected) {
    if (out.size() == limit) break;
    auto text = store.find_line(ref.page, ref.line);
    if (!text || lexicon::tokenize(*text).empty()) {
      log::warn("claim ", claim.id, ": skipping unresolvable evidence ", ref.page, ":", ref.line);
      continue;
    }
    out.push_back(std::move(*text));
  }
  if (out.empty()) out.push_back(claim.text);
  return out;
}

namespace {

std::vector<Tensor> embed_all(const lexicon::Lexicon& lex, const std::vector<std::string>& texts) {
  std::vector<Tensor> out;
  for (const auto& t : texts) out.push_back(lex.embed(lexicon::tokenize(t)));
  return out;
}

}  // namespace

Verdict predict(const RteModel& model, const corpus::Claim& claim, const std::vector<EvidenceRef>& selected,
                const corpus::ArticleStore& store, const lexicon::Lexicon& lex, std::size_t limit) {
  const auto sentences = build_rte_input(claim, selected, store, limit);
  return model.predict(lex.embed(lexicon::tokenize(claim.text)), embed_all(lex, sentences));
}

std::vector<EvidenceRef> training_evidence(const corpus::Claim& claim, const SelectedEvidence& selected,
                                           const corpus::ArticleStore& store, std::size_t limit) {
  std::vector<EvidenceRef> out;
  std::set<EvidenceRef> seen;
  auto push = [&](const EvidenceRef& ref) {
    if (out.size() < limit && seen.insert(ref).second) out.push_back(ref);
  };
  if (claim.verifiable()) {
    for (const auto& set : claim.evidence_sets) {
      const bool resolvable = !set.empty() && std::all_of(set.begin(), set.end(), [&](const EvidenceRef& r) {
        return store.find_line(r.page, r.line).has_value();
      });
      if (!resolvable) continue;
      for (const auto& ref : set) push(ref);
      break;
    }
  }
  if (auto it = selected.find(claim.id); it != selected.end()) {
    for (const auto& ref : it->second) push(ref);
  }
  return out;
}

RteModel train_rte(const std::vector<corpus::Claim>& claims, const SelectedEvidence& selected,
                   const corpus::ArticleStore& store, const lexicon::Lexicon& lex, const RteConfig& config,
                   std::uint64_t seed, RteTrainLog* log) {
  if (config.sentences == 0 || config.sentences > kMaxSentences) throw Error("train_rte: sentences must be 1 to 5");
  RteModel model = RteModel::create(lex.dim(), config, seed);
  Rng rng(seed ^ 0x5851f42d4c957f2dULL);
  auto optimizer = numerics::make_optimizer(config.optimizer);

  struct Item {
    std::size_t target;
    Tensor claim;
    std::vector<Tensor> sentences;
  };
  std::vector<Item> items;
  for (const auto& claim : claims) {
    if (!claim.label) continue;
    const auto refs = training_evidence(claim, selected, store, config.sentences);
    const auto texts = build_rte_input(claim, refs, store, config.sentences);
    items.push_back(Item{label_index(*claim.label), lex.embed(lexicon::tokenize(claim.text)), embed_all(lex, texts)});
  }

  RteTrainLog local;
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    std::size_t correct = 0;
    for (std::size_t idx : order) {
      const Item& item = items[idx];
      numerics::Graph g;
      std::vector<Var> sents;
      for (const auto& s : item.sentences) sents.push_back(g.constant(s));
      Var out = model.logits(g, g.constant(item.claim), sents, nullptr, &rng);
      const Tensor& t = out.value();
      std::size_t best = 0;
      for (std::size_t c = 1; c < kClasses; ++c) {
        if (t[c] > t[best]) best = c;
      }
      correct += best == item.target;
      Var loss = ops::cross_entropy(out, item.target);
      total += loss.value().item();
      model.params().zero_grad();
      g.backward(loss);
      optimizer->step(model.params());
    }
    const double n = items.empty() ? 1.0 : static_cast<double>(items.size());
    local.epoch_loss.push_back(total / n);
    local.epoch_accuracy.push_back(static_cast<double>(correct) / n);
    log::debug("rte seed ", seed, " epoch ", epoch + 1, " loss ", total / n, " acc ", correct / n);
  }
  if (log) *log = std::move(local);
  return model;
}

}  // namespace factpipe::rte
