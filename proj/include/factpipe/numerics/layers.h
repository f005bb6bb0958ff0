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

#ifndef FACTPIPE_NUMERICS_LAYERS_H_
#define FACTPIPE_NUMERICS_LAYERS_H_

#include <cstddef>
#include <string>

#include "factpipe/numerics/graph.h"
#include "factpipe/numerics/ops.h"
#include "factpipe/numerics/params.h"

namespace factpipe::numerics {

// y = x W^T + b with W: out x in, b: out. Parameters "<prefix>.W", "<prefix>.b".
struct Linear {
  std::string prefix;
  std::size_t in = 0;
  std::size_t out = 0;

  // W uniform in [-1/sqrt(in), 1/sqrt(in)], b zero.
  static Linear create(ParamSet& params, const std::string& prefix, std::size_t in, std::size_t out);
  // Recovers the layer from shapes already present in `params`.
  static Linear bind(const ParamSet& params, const std::string& prefix);

  Var operator()(Graph& g, ParamSet& params, Var x) const;
};

// One LSTM direction. Parameters "<prefix>.W_ih" (4h x d), "<prefix>.W_hh"
// (4h x h), "<prefix>.b" (4h). Weights are uniform in [-1/sqrt(h), 1/sqrt(h)];
// the forget-gate slice of the bias starts at 1, the rest at 0.
struct LstmLayer {
  std::string prefix;
  std::size_t input = 0;
  std::size_t hidden = 0;

  static LstmLayer create(ParamSet& params, const std::string& prefix, std::size_t input, std::size_t hidden);
  static LstmLayer bind(const ParamSet& params, const std::string& prefix);

  Var operator()(Graph& g, ParamSet& params, Var seq, bool reverse) const;
};

// Forward and backward LstmLayer under "<prefix>.fwd" and "<prefix>.bwd".
struct BiLstm {
  LstmLayer forward;
  LstmLayer backward;

  static BiLstm create(ParamSet& params, const std::string& prefix, std::size_t input, std::size_t hidden);
  static BiLstm bind(const ParamSet& params, const std::string& prefix);

  std::size_t hidden() const { return forward.hidden; }
  std::size_t input() const { return forward.input; }

  // T x 2h: row t is [forward state t ; backward state t].
  Var encode(Graph& g, ParamSet& params, Var seq) const;
};

// Rows of `seq` (T x k) reduced to [column means ; column maxima], length 2k.
Var pool_avg_max(Var seq);

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_LAYERS_H_
