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

#include "factpipe/numerics/layers.h"

#include <cmath>

#include "factpipe/common/error.h"

namespace factpipe::numerics {

Linear Linear::create(ParamSet& params, const std::string& prefix, std::size_t in, std::size_t out) {
  params.create_uniform(prefix + ".W", {out, in}, 1.0 / std::sqrt(static_cast<double>(in)));
  params.create(prefix + ".b", {out});
  return Linear{prefix, in, out};
}

Linear Linear::bind(const ParamSet& params, const std::string& prefix) {
  const Tensor& w = params.value(prefix + ".W");
  const Tensor& b = params.value(prefix + ".b");
  if (b.size() != w.rows()) throw ShapeError(prefix + ": bias does not match weight rows");
  return Linear{prefix, w.cols(), w.rows()};
}

Var Linear::operator()(Graph& g, ParamSet& params, Var x) const {
  Var w = g.param(params, prefix + ".W");
  Var b = g.param(params, prefix + ".b");
  return add_row(matmul_nt(x, w), b);
}

LstmLayer LstmLayer::create(ParamSet& params, const std::string& prefix, std::size_t input,
                            std::size_t hidden) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  params.create_uniform(prefix + ".W_ih", {4 * hidden, input}, bound);
  params.create_uniform(prefix + ".W_hh", {4 * hidden, hidden}, bound);
  Tensor& b = params.create(prefix + ".b", {4 * hidden});
  for (std::size_t j = hidden; j < 2 * hidden; ++j) b[j] = 1.0;
  return LstmLayer{prefix, input, hidden};
}

LstmLayer LstmLayer::bind(const ParamSet& params, const std::string& prefix) {
  const Tensor& w_ih = params.value(prefix + ".W_ih");
  const Tensor& w_hh = params.value(prefix + ".W_hh");
  if (w_hh.rows() != 4 * w_hh.cols() || w_ih.rows() != w_hh.rows()) {
    throw ShapeError(prefix + ": inconsistent LSTM weight shapes");
  }
  return LstmLayer{prefix, w_ih.cols(), w_hh.cols()};
}

Var LstmLayer::operator()(Graph& g, ParamSet& params, Var seq, bool reverse) const {
  return lstm(seq, g.param(params, prefix + ".W_ih"), g.param(params, prefix + ".W_hh"),
              g.param(params, prefix + ".b"), reverse);
}

BiLstm BiLstm::create(ParamSet& params, const std::string& prefix, std::size_t input, std::size_t hidden) {
  return BiLstm{LstmLayer::create(params, prefix + ".fwd", input, hidden),
                LstmLayer::create(params, prefix + ".bwd", input, hidden)};
}

BiLstm BiLstm::bind(const ParamSet& params, const std::string& prefix) {
  return BiLstm{LstmLayer::bind(params, prefix + ".fwd"), LstmLayer::bind(params, prefix + ".bwd")};
}

Var BiLstm::encode(Graph& g, ParamSet& params, Var seq) const {
  if (seq.value().empty()) throw ShapeError("bilstm: empty sequence");
  return concat_cols({forward(g, params, seq, false), backward(g, params, seq, true)});
}

Var pool_avg_max(Var seq) { return concat_cols({mean_rows(seq), max_rows(seq)}); }

}  // namespace factpipe::numerics
