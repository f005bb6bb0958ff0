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

#ifndef FACTPIPE_NUMERICS_OPS_H_
#define FACTPIPE_NUMERICS_OPS_H_

#include <cstddef>
#include <vector>

#include "factpipe/common/rng.h"
#include "factpipe/numerics/graph.h"

// Differentiable operations on Var. Shape errors throw ShapeError naming the
// node that failed to construct. Rank-1 operands act as 1 x n row vectors.
namespace factpipe::numerics {

// a (m x k) times b (k x n).
Var matmul(Var a, Var b);
// a (m x k) times transpose(b), b is (n x k).
Var matmul_nt(Var a, Var b);

Var add(Var a, Var b);
Var sub(Var a, Var b);
// Elementwise product.
Var mul(Var a, Var b);
// Adds the row vector `row` (1 x n) to every row of `a` (m x n).
Var add_row(Var a, Var row);
Var scale(Var a, double factor);
Var add_scalar(Var a, double c);
// Multiplies every entry of `a` by the single-element node `s`.
Var scale_by(Var a, Var s);

Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);

// Row-wise softmax, max-shifted.
Var softmax_rows(Var a);

Var concat_cols(const std::vector<Var>& parts);
Var concat_rows(const std::vector<Var>& parts);
Var slice_cols(Var a, std::size_t begin, std::size_t count);
Var slice_rows(Var a, std::size_t begin, std::size_t count);
Var transpose(Var a);

// Scalar sum of all entries.
Var sum(Var a);
// Column-wise reductions over rows; each returns a rank-1 tensor of length cols.
Var sum_rows(Var a);
Var mean_rows(Var a);
Var max_rows(Var a);

// Cosine similarity of two equal-length row vectors. Defined as 0 (with zero
// gradient) when either vector has zero norm.
Var cosine(Var a, Var b);

// Softmax cross-entropy of a single row of logits against class `target`.
Var cross_entropy(Var logits, std::size_t target);

// Inverted dropout; identity when `rate` is 0.
Var dropout(Var a, double rate, Rng& rng);

// Whole-sequence LSTM with gates ordered (input, forget, cell, output).
//   x: T x d, w_ih: 4h x d, w_hh: 4h x h, bias: 4h (rank 1 or 1 x 4h).
// Returns T x h hidden states. With `reverse`, the recurrence runs from the
// last row to the first; row t of the output is still the state at token t.
Var lstm(Var x, Var w_ih, Var w_hh, Var bias, bool reverse);

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_OPS_H_
