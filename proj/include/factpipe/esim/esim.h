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

#ifndef FACTPIPE_ESIM_ESIM_H_
#define FACTPIPE_ESIM_ESIM_H_

#include <cstddef>
#include <string>

#include "factpipe/common/rng.h"
#include "factpipe/numerics/graph.h"
#include "factpipe/numerics/layers.h"
#include "factpipe/numerics/params.h"
#include "factpipe/numerics/tensor.h"

namespace factpipe::esim {

using numerics::Graph;
using numerics::ParamSet;
using numerics::Tensor;
using numerics::Var;

struct EsimConfig {
  std::size_t embedding_dim = 0;
  std::size_t hidden = 0;
  // Replaces both BiLSTMs with the identity map.
  bool identity_encoding = false;
  double dropout = 0.0;
};

// Shared ESIM weights under one name prefix: "<p>.input" and "<p>.compose"
// BiLSTMs plus the "<p>.project" layer feeding the composition stage.
struct EsimParams {
  std::string prefix;
  std::size_t embedding_dim = 0;
  std::size_t hidden = 0;
  bool identity_encoding = false;
  double dropout = 0.0;
  numerics::BiLstm input;
  numerics::Linear project;
  numerics::BiLstm compose;

  static EsimParams create(ParamSet& params, const std::string& prefix, const EsimConfig& config);
  // Reconstructs the architecture from parameter shapes.
  static EsimParams bind(const ParamSet& params, const std::string& prefix);

  // Width of the input-encoding output (2h, or the embedding width in
  // identity mode).
  std::size_t encoding_dim() const { return identity_encoding ? embedding_dim : 2 * hidden; }
  std::size_t final_dim() const { return 8 * hidden; }
};

struct LocalInference {
  Var attention_a;  // Ta x Tb, rows sum to 1
  Var attention_b;  // Tb x Ta
  Var aligned_a;    // Ta x k
  Var aligned_b;    // Tb x k
  Var enhanced_a;   // Ta x 4k
  Var enhanced_b;   // Tb x 4k
};

// Soft alignment of two encoded statements plus the [x; x~; x-x~; x*x~]
// enhancement.
LocalInference local_inference(Var enc_a, Var enc_b);

struct PairVars {
  Var final_hidden;  // 8h
  Var claim_tokens;  // Tc x enc
  Var sentence_tokens;
};

struct PairEncoding {
  Tensor final_hidden;
  Tensor claim_token_encodings;
  Tensor sentence_token_encodings;
};

// Graph form. `dropout_rng` enables dropout when the configured rate is
// positive; pass nullptr at inference.
PairVars encode_pair(Graph& g, ParamSet& params, const EsimParams& esim, Var claim, Var sentence,
                     Rng* dropout_rng = nullptr);

PairEncoding encode_pair(const Tensor& claim_vecs, const Tensor& sent_vecs, ParamSet& params,
                         const EsimParams& esim);

}  // namespace factpipe::esim

#endif  // FACTPIPE_ESIM_ESIM_H_
