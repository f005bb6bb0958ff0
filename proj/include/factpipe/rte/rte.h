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

#ifndef FACTPIPE_RTE_RTE_H_
#define FACTPIPE_RTE_RTE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "factpipe/corpus/article_store.h"
#include "factpipe/corpus/types.h"
#include "factpipe/esim/esim.h"
#include "factpipe/lexicon/embeddings.h"
#include "factpipe/numerics/graph.h"
#include "factpipe/numerics/layers.h"
#include "factpipe/numerics/optim.h"
#include "factpipe/numerics/params.h"

namespace factpipe::rte {

using numerics::Tensor;
using numerics::Var;

inline constexpr std::size_t kMaxSentences = 5;
inline constexpr std::size_t kClasses = 3;

struct RteConfig {
  std::size_t hidden = 100;
  std::size_t attention_dim = 100;
  std::size_t classifier_hidden1 = 100;
  std::size_t classifier_hidden2 = 100;
  std::size_t epochs = 20;
  // Sentences per claim, 1 to 5.
  std::size_t sentences = kMaxSentences;
  double dropout = 0.0;
  bool identity_encoding = false;
  numerics::OptimizerConfig optimizer;
};

struct Verdict {
  corpus::Label label = corpus::Label::kNotEnoughInfo;
  std::array<double, kClasses> logits{};
  std::vector<double> attention_weights;
};

// Logit index of a label: Supported 0, Refuted 1, NotEnoughInfo 2.
std::size_t label_index(corpus::Label label);
corpus::Label label_at(std::size_t index);

struct Summaries {
  Tensor claim;
  std::vector<Tensor> sentences;
};

struct SummaryVars {
  Var claim;
  std::vector<Var> sentences;
};

// claim = sum over runs and claim tokens of the input encodings; sentence i =
// sum over the tokens of run i's sentence encodings.
Summaries summarize_statements(const std::vector<esim::PairEncoding>& runs);
SummaryVars summarize_statements(const std::vector<esim::PairVars>& runs);

// Shared ESIM ("esim.*"), attention perceptron ("attention": enc -> p, tanh)
// and classifier ("classifier.1", ".2", ".3": 16h -> c1 -> c2 -> 3).
class RteModel {
 public:
  static RteModel create(std::size_t embedding_dim, const RteConfig& config, std::uint64_t seed);
  static RteModel load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  RteModel(RteModel&&) = default;
  RteModel& operator=(RteModel&&) = default;

  // Raw cosine weights, one per sentence summary; 0 for a zero-norm projection.
  std::vector<Var> attention_weights(numerics::Graph& g, Var claim_summary,
                                     const std::vector<Var>& sentence_summaries) const;
  std::vector<double> attention_weights(const Tensor& claim_summary, const std::vector<Tensor>& sentence_summaries) const;

  // v_i = w_i * final_hidden_i, [avg ; max] over i, then the classifier.
  Var classify(numerics::Graph& g, const std::vector<esim::PairVars>& runs, const std::vector<Var>& weights,
               Rng* dropout_rng = nullptr) const;

  // Full graph from embedded statements to logits; `weights_out` receives the
  // attention weight nodes.
  Var logits(numerics::Graph& g, Var claim, const std::vector<Var>& sentences, std::vector<Var>* weights_out = nullptr,
             Rng* dropout_rng = nullptr) const;

  Verdict aggregate_and_classify(const std::vector<esim::PairEncoding>& runs) const;
  Verdict predict(const Tensor& claim_vecs, const std::vector<Tensor>& sentence_vecs) const;

  numerics::ParamSet& params() { return params_; }
  const numerics::ParamSet& params() const { return params_; }
  const esim::EsimParams& esim() const { return esim_; }
  std::size_t embedding_dim() const { return esim_.embedding_dim; }

 private:
  RteModel() = default;
  void bind_layers();

  mutable numerics::ParamSet params_;
  esim::EsimParams esim_;
  numerics::Linear attention_;
  numerics::Linear classifier1_;
  numerics::Linear classifier2_;
  numerics::Linear classifier3_;
};

// Sentence texts for the selected pairs in rank order, at most `limit`.
// Unresolvable pairs are skipped with a warning; when nothing resolves the
// claim text itself is the single sentence.
std::vector<std::string> build_rte_input(const corpus::Claim& claim, const std::vector<corpus::EvidenceRef>& selected,
                                         const corpus::ArticleStore& store, std::size_t limit = kMaxSentences);

Verdict predict(const RteModel& model, const corpus::Claim& claim, const std::vector<corpus::EvidenceRef>& selected,
                const corpus::ArticleStore& store, const lexicon::Lexicon& lex, std::size_t limit = kMaxSentences);

struct RteTrainLog {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
};

using SelectedEvidence = std::map<std::int64_t, std::vector<corpus::EvidenceRef>>;

// Training evidence for one claim: for Supported/Refuted the first resolvable
// gold set topped up with selected pairs, otherwise the selected pairs; at
// most `limit`, duplicates removed.
std::vector<corpus::EvidenceRef> training_evidence(const corpus::Claim& claim, const SelectedEvidence& selected,
                                                   const corpus::ArticleStore& store, std::size_t limit);

RteModel train_rte(const std::vector<corpus::Claim>& claims, const SelectedEvidence& selected,
                   const corpus::ArticleStore& store, const lexicon::Lexicon& lex, const RteConfig& config,
                   std::uint64_t seed, RteTrainLog* log = nullptr);

}  // namespace factpipe::rte

#endif  // FACTPIPE_RTE_RTE_H_
