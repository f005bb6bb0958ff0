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

#include "factpipe/sentsel/ranker.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "factpipe/common/error.h"
#include "factpipe/common/log.h"
#include "factpipe/common/parallel.h"
#include "factpipe/lexicon/tokenizer.h"
#include "factpipe/numerics/ops.h"

namespace factpipe::sentsel {

namespace ops = numerics;
using corpus::EvidenceRef;

double hinge_loss(double s_p, const std::vector<double>& s_n) {
  double total = 0.0;
  for (double n : s_n) total += std::max(0.0, 1.0 + n - s_p);
  return total;
}

Var hinge_loss(Var s_p, const std::vector<Var>& s_n) {
  if (s_n.empty()) return s_p.graph().constant(numerics::Tensor::scalar(0.0));
  Var total;
  for (const Var& n : s_n) {
    Var term = ops::relu(ops::add_scalar(ops::sub(n, s_p), 1.0));
    total = total.valid() ? ops::add(total, term) : term;
  }
  return total;
}

namespace {

std::set<EvidenceRef> gold_refs(const corpus::Claim& claim) {
  std::set<EvidenceRef> gold;
  for (const auto& set : claim.evidence_sets) gold.insert(set.begin(), set.end());
  return gold;
}

std::vector<std::string> gold_pages(const corpus::Claim& claim) {
  std::vector<std::string> pages;
  for (const auto& set : claim.evidence_sets) {
    for (const auto& ref : set) {
      if (std::find(pages.begin(), pages.end(), ref.page) == pages.end()) pages.push_back(ref.page);
    }
  }
  return pages;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string join_texts(const std::vector<SentenceRef>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

}  // namespace

std::vector<SentenceRef> candidate_sentences(const corpus::ArticleStore& store, const std::vector<std::string>& pages) {
  std::vector<SentenceRef> out;
  for (const auto& page : pages) {
    auto article = store.find(page);
    if (!article) continue;
    for (const auto& line : article->lines) {
      if (!blank(line.sentence)) out.push_back(SentenceRef{page, line.line_no, line.sentence});
    }
  }
  return out;
}

std::vector<SentenceRef> sample_negatives(const corpus::Claim& claim, const corpus::ArticleStore& store, Rng& rng,
                                          std::size_t m) {
  if (m == 0) throw Error("sample_negatives: m must be at least 1");
  const auto gold = gold_refs(claim);
  std::vector<SentenceRef> pool;
  for (auto& s : candidate_sentences(store, gold_pages(claim))) {
    if (!gold.count(EvidenceRef{s.page, s.line})) pool.push_back(std::move(s));
  }
  if (pool.empty()) {
    log::warn("claim ", claim.id, ": no negative sentences available in its evidence pages");
    return pool;
  }
  const std::size_t take = std::min(m, pool.size());
  for (std::size_t i = 0; i < take; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  pool.resize(take);
  return pool;
}

RankerModel RankerModel::create(std::size_t embedding_dim, const RankerConfig& config, std::uint64_t seed) {
  if (config.head_hidden == 0) throw Error("ranker: head_hidden must be at least 1");
  RankerModel model;
  model.params_ = numerics::ParamSet(seed);
  esim::EsimConfig ec;
  ec.embedding_dim = embedding_dim;
  ec.hidden = config.hidden;
  ec.dropout = config.dropout;
  model.esim_ = esim::EsimParams::create(model.params_, "esim", ec);
  numerics::Linear::create(model.params_, "head.hidden", model.esim_.final_dim(), config.head_hidden);
  numerics::Linear::create(model.params_, "head.out", config.head_hidden, 1);
  model.bind_layers();
  return model;
}

void RankerModel::bind_layers() {
  head_hidden_ = numerics::Linear::bind(params_, "head.hidden");
  head_out_ = numerics::Linear::bind(params_, "head.out");
  if (head_hidden_.in != esim_.final_dim() || head_out_.in != head_hidden_.out || head_out_.out != 1) {
    throw FormatError("ranker: scoring head does not match the encoder");
  }
}

RankerModel RankerModel::load(const std::filesystem::path& path) {
  RankerModel model;
  model.params_ = numerics::ParamSet::load(path);
  model.esim_ = esim::EsimParams::bind(model.params_, "esim");
  model.bind_layers();
  return model;
}

void RankerModel::save(const std::filesystem::path& path) const { params_.save(path); }

Var RankerModel::score(numerics::Graph& g, Var claim, Var sentence, Rng* dropout_rng) const {
  auto pair = esim::encode_pair(g, params_, esim_, claim, sentence, dropout_rng);
  return head_out_(g, params_, ops::tanh(head_hidden_(g, params_, pair.final_hidden)));
}

double RankerModel::score(const numerics::Tensor& claim_vecs, const numerics::Tensor& sentence_vecs) const {
  numerics::Graph g;
  return score(g, g.constant(claim_vecs), g.constant(sentence_vecs)).value().item();
}

double RankerModel::score(const lexicon::Lexicon& lex, std::string_view claim, std::string_view sentence) const {
  return score(lex.embed(lexicon::tokenize(claim)), lex.embed(lexicon::tokenize(sentence)));
}

RankerModel train_ranker(const std::vector<corpus::Claim>& claims, const corpus::ArticleStore& store,
                         const lexicon::Lexicon& lex, const RankerConfig& config, std::uint64_t seed,
                         TrainLog* log) {
  RankerModel model = RankerModel::create(lex.dim(), config, seed);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto optimizer = numerics::make_optimizer(config.optimizer);

  // Resolved positives per claim; claims without any resolvable set are skipped.
  struct Item {
    const corpus::Claim* claim;
    numerics::Tensor claim_vecs;
    std::vector<std::string> positives;
  };
  std::vector<Item> items;
  TrainLog local_log;
  for (const auto& claim : claims) {
    if (!claim.verifiable()) continue;
    Item item{&claim, {}, {}};
    for (const auto& set : claim.evidence_sets) {
      std::vector<SentenceRef> sentences;
      bool ok = !set.empty();
      for (const auto& ref : set) {
        auto text = store.find_line(ref.page, ref.line);
        if (!text || blank(*text)) {
          ok = false;
          break;
        }
        sentences.push_back(SentenceRef{ref.page, ref.line, *text});
      }
      if (ok) item.positives.push_back(join_texts(sentences));
    }
    const auto tokens = lexicon::tokenize(claim.text);
    if (item.positives.empty() || tokens.empty()) {
      ++local_log.skipped_claims;
      continue;
    }
    item.claim_vecs = lex.embed(tokens);
    items.push_back(std::move(item));
  }
  if (local_log.skipped_claims > 0) {
    log::warn("train_ranker: skipped ", local_log.skipped_claims, " claims without resolvable evidence");
  }

  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    std::size_t steps = 0;
    for (std::size_t idx : order) {
      const Item& item = items[idx];
      const std::string& positive = item.positives[epoch % item.positives.size()];
      numerics::Graph g;
      Var claim = g.constant(item.claim_vecs);
      Var s_p = model.score(g, claim, g.constant(lex.embed(lexicon::tokenize(positive))), &rng);
      std::vector<Var> s_n;
      for (std::size_t k = 0; k < config.negative_sets; ++k) {
        auto negatives = sample_negatives(*item.claim, store, rng, config.negatives);
        if (negatives.empty()) break;
        s_n.push_back(model.score(g, claim, g.constant(lex.embed(lexicon::tokenize(join_texts(negatives)))), &rng));
      }
      if (s_n.empty()) continue;
      Var loss = hinge_loss(s_p, s_n);
      total += loss.value().item();
      ++steps;
      model.params().zero_grad();
      g.backward(loss);
      optimizer->step(model.params());
    }
    local_log.steps += steps;
    const double mean = steps ? total / static_cast<double>(steps) : 0.0;
    local_log.epoch_loss.push_back(mean);
    log::debug("ranker seed ", seed, " epoch ", epoch + 1, " loss ", mean);
  }
  if (log) *log = std::move(local_log);
  return model;
}

std::vector<RankerModel> train_ensemble(const std::vector<corpus::Claim>& claims, const corpus::ArticleStore& store,
                                        const lexicon::Lexicon& lex, const RankerConfig& config,
                                        const std::vector<std::uint64_t>& seeds, std::size_t jobs) {
  std::vector<std::optional<RankerModel>> slots(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    slots[i].emplace(train_ranker(claims, store, lex, config, seeds[i]));
  });
  std::vector<RankerModel> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double ensemble_mean(std::vector<double> scores) {
  if (scores.empty()) throw Error("ensemble_mean: no scores");
  std::sort(scores.begin(), scores.end());
  const double base = scores.front();
  double spread = 0.0;
  for (double s : scores) spread += s - base;
  return base + spread / static_cast<double>(scores.size());
}

std::vector<RankedSentence> score_sentences(const std::vector<const RankerModel*>& models,
                                            const lexicon::Lexicon& lex, std::string_view claim,
                                            const std::vector<SentenceRef>& sentences, std::size_t jobs) {
  if (models.empty()) throw Error("score_sentences: at least one model is required");
  std::vector<RankedSentence> ranked(sentences.size());
  if (sentences.empty()) return ranked;
  const numerics::Tensor claim_vecs = lex.embed(lexicon::tokenize(claim));
  parallel_for(sentences.size(), jobs, [&](std::size_t i) {
    const numerics::Tensor sent = lex.embed(lexicon::tokenize(sentences[i].text));
    std::vector<double> per_model;
    per_model.reserve(models.size());
    for (const RankerModel* m : models) per_model.push_back(m->score(claim_vecs, sent));
    ranked[i] = RankedSentence{sentences[i].page, sentences[i].line, ensemble_mean(std::move(per_model))};
  });
  std::sort(ranked.begin(), ranked.end(), [](const RankedSentence& a, const RankedSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.page_id != b.page_id) return a.page_id < b.page_id;
    return a.line_no < b.line_no;
  });
  return ranked;
}

std::vector<EvidenceRef> select_top5(const std::vector<RankedSentence>& ranked) {
  std::vector<EvidenceRef> out;
  for (std::size_t i = 0; i < ranked.size() && i < kSelectedSentences; ++i) {
    out.push_back(EvidenceRef{ranked[i].page_id, ranked[i].line_no});
  }
  return out;
}

}  // namespace factpipe::sentsel
