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

#ifndef FACTPIPE_SENTSEL_RANKER_H_
#define FACTPIPE_SENTSEL_RANKER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "factpipe/common/rng.h"
#include "factpipe/corpus/article_store.h"
#include "factpipe/corpus/types.h"
#include "factpipe/esim/esim.h"
#include "factpipe/lexicon/embeddings.h"
#include "factpipe/numerics/graph.h"
#include "factpipe/numerics/layers.h"
#include "factpipe/numerics/optim.h"
#include "factpipe/numerics/params.h"

namespace factpipe::sentsel {

using numerics::Var;

inline constexpr std::size_t kDefaultNegatives = 5;
inline constexpr std::size_t kDefaultEnsembleSize = 10;
inline constexpr std::size_t kSelectedSentences = 5;

// sum over negatives of max(0, 1 + s_n - s_p).
double hinge_loss(double s_p, const std::vector<double>& s_n);
Var hinge_loss(Var s_p, const std::vector<Var>& s_n);

struct SentenceRef {
  std::string page;
  int line = 0;
  std::string text;
};

// Up to m distinct non-empty, non-gold lines of the claim's gold pages,
// drawn uniformly without replacement.
std::vector<SentenceRef> sample_negatives(const corpus::Claim& claim, const corpus::ArticleStore& store, Rng& rng,
                                          std::size_t m = kDefaultNegatives);

// Every non-empty line of the given pages, in page then line order. Unknown
// pages are skipped.
std::vector<SentenceRef> candidate_sentences(const corpus::ArticleStore& store, const std::vector<std::string>& pages);

struct RankerConfig {
  std::size_t hidden = 100;
  std::size_t head_hidden = 100;
  std::size_t negatives = kDefaultNegatives;
  // Negative concatenations scored against each positive.
  std::size_t negative_sets = 1;
  std::size_t epochs = 20;
  double dropout = 0.0;
  numerics::OptimizerConfig optimizer;
};

struct TrainLog {
  std::vector<double> epoch_loss;  // mean step loss per epoch
  std::size_t steps = 0;
  std::size_t skipped_claims = 0;
};

// ESIM encoder plus scoring head ("head.hidden": 8h -> r with tanh,
// "head.out": r -> 1).
class RankerModel {
 public:
  static RankerModel create(std::size_t embedding_dim, const RankerConfig& config, std::uint64_t seed);
  static RankerModel load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  RankerModel(RankerModel&&) = default;
  RankerModel& operator=(RankerModel&&) = default;

  Var score(numerics::Graph& g, Var claim, Var sentence, Rng* dropout_rng = nullptr) const;
  double score(const lexicon::Lexicon& lex, std::string_view claim, std::string_view sentence) const;
  double score(const numerics::Tensor& claim_vecs, const numerics::Tensor& sentence_vecs) const;

  numerics::ParamSet& params() { return params_; }
  const numerics::ParamSet& params() const { return params_; }
  const esim::EsimParams& esim() const { return esim_; }
  std::size_t embedding_dim() const { return esim_.embedding_dim; }

 private:
  RankerModel() = default;
  void bind_layers();

  mutable numerics::ParamSet params_;
  esim::EsimParams esim_;
  numerics::Linear head_hidden_;
  numerics::Linear head_out_;
};

RankerModel train_ranker(const std::vector<corpus::Claim>& claims, const corpus::ArticleStore& store,
                         const lexicon::Lexicon& lex, const RankerConfig& config, std::uint64_t seed,
                         TrainLog* log = nullptr);

// One model per seed, trained on up to `jobs` threads.
std::vector<RankerModel> train_ensemble(const std::vector<corpus::Claim>& claims, const corpus::ArticleStore& store,
                                        const lexicon::Lexicon& lex, const RankerConfig& config,
                                        const std::vector<std::uint64_t>& seeds, std::size_t jobs = 1);

struct RankedSentence {
  std::string page_id;
  int line_no = 0;
  double score = 0.0;
};

// Mean of a set of model scores. The values are sorted first and averaged as
// min + sum(x - min) / n, so the result does not depend on model order and
// equals x exactly when every score is x.
double ensemble_mean(std::vector<double> scores);

// Scores each sentence against the claim with every model and ranks by the
// ensemble mean, descending; ties by (page, line) ascending.
std::vector<RankedSentence> score_sentences(const std::vector<const RankerModel*>& models,
                                            const lexicon::Lexicon& lex, std::string_view claim,
                                            const std::vector<SentenceRef>& sentences, std::size_t jobs = 1);

std::vector<corpus::EvidenceRef> select_top5(const std::vector<RankedSentence>& ranked);

}  // namespace factpipe::sentsel

#endif  // FACTPIPE_SENTSEL_RANKER_H_
