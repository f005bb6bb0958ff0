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

#include "factpipe/esim/esim.h"

#include "factpipe/common/error.h"
#include "factpipe/numerics/ops.h"

namespace factpipe::esim {

namespace ops = numerics;

EsimParams EsimParams::create(ParamSet& params, const std::string& prefix, const EsimConfig& config) {
  if (config.embedding_dim == 0 || config.hidden == 0) throw Error("esim: embedding_dim and hidden must be >= 1");
  EsimParams e;
  e.prefix = prefix;
  e.embedding_dim = config.embedding_dim;
  e.hidden = config.hidden;
  e.identity_encoding = config.identity_encoding;
  e.dropout = config.dropout;
  if (!e.identity_encoding) {
    e.input = numerics::BiLstm::create(params, prefix + ".input", e.embedding_dim, e.hidden);
  }
  e.project = numerics::Linear::create(params, prefix + ".project", 4 * e.encoding_dim(), 2 * e.hidden);
  if (!e.identity_encoding) {
    e.compose = numerics::BiLstm::create(params, prefix + ".compose", 2 * e.hidden, e.hidden);
  }
  return e;
}

EsimParams EsimParams::bind(const ParamSet& params, const std::string& prefix) {
  EsimParams e;
  e.prefix = prefix;
  e.project = numerics::Linear::bind(params, prefix + ".project");
  e.hidden = e.project.out / 2;
  if (e.project.out % 2 != 0 || e.project.in % 4 != 0) {
    throw FormatError("esim: projection shape " + std::to_string(e.project.out) + "x" +
                      std::to_string(e.project.in) + " does not fit the architecture");
  }
  e.identity_encoding = !params.contains(prefix + ".input.fwd.W_ih");
  if (e.identity_encoding) {
    e.embedding_dim = e.project.in / 4;
  } else {
    e.input = numerics::BiLstm::bind(params, prefix + ".input");
    e.compose = numerics::BiLstm::bind(params, prefix + ".compose");
    e.embedding_dim = e.input.input();
    if (e.input.hidden() != e.hidden || e.compose.hidden() != e.hidden || e.compose.input() != 2 * e.hidden) {
      throw FormatError("esim: inconsistent hidden sizes under '" + prefix + "'");
    }
  }
  return e;
}

LocalInference local_inference(Var enc_a, Var enc_b) {
  if (enc_a.cols() != enc_b.cols()) {
    throw ShapeError("local_inference: encoding widths differ (" + std::to_string(enc_a.cols()) + " vs " +
                     std::to_string(enc_b.cols()) + ")");
  }
  LocalInference li;
  Var e = ops::matmul_nt(enc_a, enc_b);
  li.attention_a = ops::softmax_rows(e);
  li.attention_b = ops::softmax_rows(ops::transpose(e));
  li.aligned_a = ops::matmul(li.attention_a, enc_b);
  li.aligned_b = ops::matmul(li.attention_b, enc_a);
  li.enhanced_a = ops::concat_cols(
      {enc_a, li.aligned_a, ops::sub(enc_a, li.aligned_a), ops::mul(enc_a, li.aligned_a)});
  li.enhanced_b = ops::concat_cols(
      {enc_b, li.aligned_b, ops::sub(enc_b, li.aligned_b), ops::mul(enc_b, li.aligned_b)});
  return li;
}

namespace {

Var as_matrix(Var v) {
  // Rank-1 inputs are single-token statements.
  if (v.value().rank() == 1) return ops::concat_rows({v});
  return v;
}

}  // namespace

PairVars encode_pair(Graph& g, ParamSet& params, const EsimParams& esim, Var claim, Var sentence,
                     Rng* dropout_rng) {
  if (claim.value().size() == 0 || sentence.value().size() == 0) throw ShapeError("encode_pair: empty statement");
  claim = as_matrix(claim);
  sentence = as_matrix(sentence);
  if (claim.cols() != esim.embedding_dim || sentence.cols() != esim.embedding_dim) {
    throw ShapeError("encode_pair: expected token vectors of width " + std::to_string(esim.embedding_dim) +
                     ", got " + std::to_string(claim.cols()) + " and " + std::to_string(sentence.cols()));
  }
  const bool drop = dropout_rng && esim.dropout > 0.0;
  if (drop) {
    claim = ops::dropout(claim, esim.dropout, *dropout_rng);
    sentence = ops::dropout(sentence, esim.dropout, *dropout_rng);
  }
  PairVars out;
  if (esim.identity_encoding) {
    out.claim_tokens = claim;
    out.sentence_tokens = sentence;
  } else {
    out.claim_tokens = esim.input.encode(g, params, claim);
    out.sentence_tokens = esim.input.encode(g, params, sentence);
  }
  LocalInference li = local_inference(out.claim_tokens, out.sentence_tokens);
  auto compose = [&](Var enhanced) {
    Var projected = ops::relu(esim.project(g, params, enhanced));
    if (drop) projected = ops::dropout(projected, esim.dropout, *dropout_rng);
    if (esim.identity_encoding) return projected;
    return esim.compose.encode(g, params, projected);
  };
  out.final_hidden = ops::concat_cols(
      {numerics::pool_avg_max(compose(li.enhanced_a)), numerics::pool_avg_max(compose(li.enhanced_b))});
  return out;
}

PairEncoding encode_pair(const Tensor& claim_vecs, const Tensor& sent_vecs, ParamSet& params,
                         const EsimParams& esim) {
  Graph g;
  PairVars v = encode_pair(g, params, esim, g.constant(claim_vecs), g.constant(sent_vecs));
  return PairEncoding{v.final_hidden.value(), v.claim_tokens.value(), v.sentence_tokens.value()};
}

}  // namespace factpipe::esim
