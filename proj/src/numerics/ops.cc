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

#include "factpipe/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "factpipe/common/error.h"

namespace factpipe::numerics {
namespace {

// c (m x n) += a (m x k) * b (k x n)
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      if (aip == 0.0) continue;
      const double* bp = b + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

// c (m x n) += a (m x k) * transpose(b), b is (n x k)
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      c[i * n + j] += acc;
    }
  }
}

// c (m x n) += transpose(a) * b, a is (inner x m), b is (inner x n)
void gemm_tn(const double* a, const double* b, double* c, std::size_t inner, std::size_t m, std::size_t n) {
  for (std::size_t p = 0; p < inner; ++p) {
    const double* ap = a + p * m;
    const double* bp = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = ap[i];
      if (api == 0.0) continue;
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
}

double sigmoid_scalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor matrix_like_rows(std::size_t rows, std::size_t cols, bool rank1) {
  return rank1 ? Tensor(Shape{cols}) : Tensor(Shape{rows, cols});
}

void shape_check(bool ok, const Graph& g, OpKind kind, const std::string& what) {
  if (!ok) throw ShapeError(g.next_label(kind) + ": " + what);
}

std::string dims(const Tensor& t) { return std::to_string(t.rows()) + "x" + std::to_string(t.cols()); }

// Applies fn(grad_buffer) when input `which` of node `self` needs a gradient.
template <typename F>
void with_input_grad(Graph& g, std::size_t self, std::size_t which, F&& fn) {
  const std::size_t id = g.node(self).inputs[which];
  if (!g.requires_grad(id)) return;
  fn(g.grad_buffer(id), g.value(id));
}

template <typename Fwd, typename Deriv>
Var unary(Var a, OpKind kind, Fwd fwd, Deriv deriv_from_output) {
  Tensor out(a.value().shape());
  auto src = a.value().values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = fwd(src[i]);
  return a.graph().record(kind, {a}, std::move(out), [deriv_from_output](Graph& g, std::size_t self) {
    const Node& n = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor& va) {
      auto y = n.value.values();
      auto gy = n.grad.values();
      auto gx = ga.values();
      auto x = va.values();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += gy[i] * deriv_from_output(x[i], y[i]);
    });
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  shape_check(A.cols() == B.rows(), g, OpKind::kMatMul, "cannot multiply " + dims(A) + " by " + dims(B));
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  Tensor out = Tensor::matrix(m, n);
  gemm_nn(A.values().data(), B.values().data(), out.values().data(), m, k, n);
  return g.record(OpKind::kMatMul, {a, b}, std::move(out), [m, k, n](Graph& g, std::size_t self) {
    const Tensor& G = g.node(self).grad;
    const Tensor& A = g.value(g.node(self).inputs[0]);
    const Tensor& B = g.value(g.node(self).inputs[1]);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      gemm_nt(G.values().data(), B.values().data(), ga.values().data(), m, n, k);
    });
    with_input_grad(g, self, 1, [&](Tensor& gb, const Tensor&) {
      gemm_tn(A.values().data(), G.values().data(), gb.values().data(), m, k, n);
    });
  });
}

Var matmul_nt(Var a, Var b) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  shape_check(A.cols() == B.cols(), g, OpKind::kMatMulNT,
              "cannot multiply " + dims(A) + " by transpose of " + dims(B));
  const std::size_t m = A.rows(), k = A.cols(), n = B.rows();
  Tensor out = Tensor::matrix(m, n);
  gemm_nt(A.values().data(), B.values().data(), out.values().data(), m, k, n);
  return g.record(OpKind::kMatMulNT, {a, b}, std::move(out), [m, k, n](Graph& g, std::size_t self) {
    const Tensor& G = g.node(self).grad;
    const Tensor& A = g.value(g.node(self).inputs[0]);
    const Tensor& B = g.value(g.node(self).inputs[1]);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      gemm_nn(G.values().data(), B.values().data(), ga.values().data(), m, n, k);
    });
    with_input_grad(g, self, 1, [&](Tensor& gb, const Tensor&) {
      gemm_tn(G.values().data(), A.values().data(), gb.values().data(), m, n, k);
    });
  });
}

namespace {

template <typename Combine, typename DA, typename DB>
Var binary(Var a, Var b, OpKind kind, Combine combine, DA da, DB db) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  shape_check(A.same_shape(B), g, kind, "operand shapes " + dims(A) + " and " + dims(B) + " differ");
  Tensor out(A.shape());
  auto x = A.values();
  auto y = B.values();
  auto z = out.values();
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = combine(x[i], y[i]);
  return g.record(kind, {a, b}, std::move(out), [da, db](Graph& g, std::size_t self) {
    const Node& n = g.node(self);
    auto gz = n.grad.values();
    auto x = g.value(n.inputs[0]).values();
    auto y = g.value(n.inputs[1]).values();
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      auto gx = ga.values();
      for (std::size_t i = 0; i < gz.size(); ++i) gx[i] += gz[i] * da(x[i], y[i]);
    });
    with_input_grad(g, self, 1, [&](Tensor& gb, const Tensor&) {
      auto gy = gb.values();
      for (std::size_t i = 0; i < gz.size(); ++i) gy[i] += gz[i] * db(x[i], y[i]);
    });
  });
}

}  // namespace

Var add(Var a, Var b) {
  return binary(
      a, b, OpKind::kAdd, [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Var sub(Var a, Var b) {
  return binary(
      a, b, OpKind::kSub, [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Var mul(Var a, Var b) {
  return binary(
      a, b, OpKind::kMul, [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Var add_row(Var a, Var row) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const Tensor& R = row.value();
  shape_check(R.size() == A.cols(), g, OpKind::kAddRow,
              "row of size " + std::to_string(R.size()) + " does not fit " + dims(A));
  Tensor out = A;
  const std::size_t m = A.rows(), n = A.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) += R[j];
  return g.record(OpKind::kAddRow, {a, row}, std::move(out), [m, n](Graph& g, std::size_t self) {
    const Tensor& G = g.node(self).grad;
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < G.size(); ++i) ga[i] += G[i];
    });
    with_input_grad(g, self, 1, [&](Tensor& gr, const Tensor&) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) gr[j] += G[i * n + j];
    });
  });
}

Var scale(Var a, double factor) {
  return unary(
      a, OpKind::kScale, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var add_scalar(Var a, double c) {
  return unary(
      a, OpKind::kAddScalar, [c](double x) { return x + c; }, [](double, double) { return 1.0; });
}

Var scale_by(Var a, Var s) {
  Graph& g = a.graph();
  shape_check(s.value().size() == 1, g, OpKind::kScaleBy,
              "scale must be a single element, got " + dims(s.value()));
  const double factor = s.value()[0];
  Tensor out = a.value();
  for (double& v : out.values()) v *= factor;
  return g.record(OpKind::kScaleBy, {a, s}, std::move(out), [](Graph& g, std::size_t self) {
    const Node& n = g.node(self);
    const Tensor& A = g.value(n.inputs[0]);
    const double factor = g.value(n.inputs[1])[0];
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += factor * n.grad[i];
    });
    with_input_grad(g, self, 1, [&](Tensor& gs, const Tensor&) {
      double acc = 0.0;
      for (std::size_t i = 0; i < A.size(); ++i) acc += A[i] * n.grad[i];
      gs[0] += acc;
    });
  });
}

Var sigmoid(Var a) {
  return unary(
      a, OpKind::kSigmoid, [](double x) { return sigmoid_scalar(x); },
      [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var a) {
  return unary(
      a, OpKind::kTanh, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var a) {
  return unary(
      a, OpKind::kRelu, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var softmax_rows(Var a) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  Tensor out(A.shape());
  const std::size_t m = A.rows(), n = A.cols();
  for (std::size_t i = 0; i < m; ++i) {
    auto x = A.row(i);
    auto y = out.row(i);
    const double mx = *std::max_element(x.begin(), x.end());
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += (y[j] = std::exp(x[j] - mx));
    for (std::size_t j = 0; j < n; ++j) y[j] /= total;
  }
  return g.record(OpKind::kSoftmaxRows, {a}, std::move(out), [m, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < m; ++i) {
        auto y = node.value.row(i);
        auto gy = node.grad.row(i);
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += gy[j] * y[j];
        auto gx = ga.row(i);
        for (std::size_t j = 0; j < n; ++j) gx[j] += y[j] * (gy[j] - dot);
      }
    });
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no operands");
  Graph& g = parts.front().graph();
  const std::size_t m = parts.front().rows();
  std::size_t total = 0;
  bool all_rank1 = true;
  for (const Var& p : parts) {
    shape_check(p.rows() == m, g, OpKind::kConcatCols,
                "row counts differ (" + std::to_string(m) + " vs " + std::to_string(p.rows()) + ")");
    total += p.cols();
    all_rank1 = all_rank1 && p.value().rank() == 1;
  }
  Tensor out = matrix_like_rows(m, total, all_rank1);
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const Var& p : parts) {
    offsets.push_back(off);
    const Tensor& v = p.value();
    for (std::size_t i = 0; i < m; ++i)
      std::copy(v.row(i).begin(), v.row(i).end(), out.row(i).begin() + off);
    off += v.cols();
  }
  return g.record(OpKind::kConcatCols, parts, std::move(out), [offsets, m](Graph& g, std::size_t self) {
    const Node& n = g.node(self);
    for (std::size_t k = 0; k < n.inputs.size(); ++k) {
      with_input_grad(g, self, k, [&](Tensor& gp, const Tensor&) {
        const std::size_t c = gp.cols();
        for (std::size_t i = 0; i < m; ++i) {
          auto src = n.grad.row(i).subspan(offsets[k], c);
          auto dst = gp.row(i);
          for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
        }
      });
    }
  });
}

Var concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no operands");
  Graph& g = parts.front().graph();
  const std::size_t n = parts.front().cols();
  std::size_t total = 0;
  for (const Var& p : parts) {
    shape_check(p.cols() == n, g, OpKind::kConcatRows,
                "column counts differ (" + std::to_string(n) + " vs " + std::to_string(p.cols()) + ")");
    total += p.rows();
  }
  Tensor out = Tensor::matrix(total, n);
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const Var& p : parts) {
    offsets.push_back(off);
    std::copy(p.value().values().begin(), p.value().values().end(), out.values().begin() + off * n);
    off += p.rows();
  }
  return g.record(OpKind::kConcatRows, parts, std::move(out), [offsets, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    for (std::size_t k = 0; k < node.inputs.size(); ++k) {
      with_input_grad(g, self, k, [&](Tensor& gp, const Tensor&) {
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += node.grad[offsets[k] * n + i];
      });
    }
  });
}

Var slice_cols(Var a, std::size_t begin, std::size_t count) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  shape_check(count > 0 && begin + count <= A.cols(), g, OpKind::kSliceCols,
              "columns [" + std::to_string(begin) + ", " + std::to_string(begin + count) + ") outside " + dims(A));
  const std::size_t m = A.rows();
  Tensor out = matrix_like_rows(m, count, A.rank() == 1);
  for (std::size_t i = 0; i < m; ++i) {
    auto src = A.row(i).subspan(begin, count);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return g.record(OpKind::kSliceCols, {a}, std::move(out), [begin, count, m](Graph& g, std::size_t self) {
    const Node& n = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < m; ++i) {
        auto dst = ga.row(i).subspan(begin, count);
        auto src = n.grad.row(i);
        for (std::size_t j = 0; j < count; ++j) dst[j] += src[j];
      }
    });
  });
}

Var slice_rows(Var a, std::size_t begin, std::size_t count) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  shape_check(count > 0 && begin + count <= A.rows(), g, OpKind::kSliceRows,
              "rows [" + std::to_string(begin) + ", " + std::to_string(begin + count) + ") outside " + dims(A));
  const std::size_t n = A.cols();
  Tensor out = Tensor::matrix(count, n);
  std::copy(A.values().begin() + begin * n, A.values().begin() + (begin + count) * n, out.values().begin());
  return g.record(OpKind::kSliceRows, {a}, std::move(out), [begin, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < node.grad.size(); ++i) ga[begin * n + i] += node.grad[i];
    });
  });
}

Var transpose(Var a) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const std::size_t m = A.rows(), n = A.cols();
  Tensor out = Tensor::matrix(n, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(j, i) = A(i, j);
  return g.record(OpKind::kTranspose, {a}, std::move(out), [m, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += node.grad[j * m + i];
    });
  });
}

Var sum(Var a) {
  Graph& g = a.graph();
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  return g.record(OpKind::kSum, {a}, Tensor::scalar(total), [](Graph& g, std::size_t self) {
    const double gs = g.node(self).grad[0];
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (double& v : ga.values()) v += gs;
    });
  });
}

Var sum_rows(Var a) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const std::size_t m = A.rows(), n = A.cols();
  Tensor out(Shape{n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j] += A(i, j);
  return g.record(OpKind::kSumRows, {a}, std::move(out), [m, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += node.grad[j];
    });
  });
}

Var mean_rows(Var a) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const std::size_t m = A.rows(), n = A.cols();
  Tensor out(Shape{n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j] += A(i, j);
  for (double& v : out.values()) v /= static_cast<double>(m);
  return g.record(OpKind::kMeanRows, {a}, std::move(out), [m, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    const double inv = 1.0 / static_cast<double>(m);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += node.grad[j] * inv;
    });
  });
}

Var max_rows(Var a) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const std::size_t m = A.rows(), n = A.cols();
  Tensor out(Shape{n});
  std::vector<std::size_t> argmax(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    double best = A(0, j);
    for (std::size_t i = 1; i < m; ++i) {
      if (A(i, j) > best) {
        best = A(i, j);
        argmax[j] = i;
      }
    }
    out[j] = best;
  }
  return g.record(OpKind::kMaxRows, {a}, std::move(out), [argmax, n](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t j = 0; j < n; ++j) ga[argmax[j] * n + j] += node.grad[j];
    });
  });
}

Var cosine(Var a, Var b) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  shape_check(A.size() == B.size(), g, OpKind::kCosine,
              "vector lengths " + std::to_string(A.size()) + " and " + std::to_string(B.size()) + " differ");
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    dot += A[i] * B[i];
    aa += A[i] * A[i];
    bb += B[i] * B[i];
  }
  const double na = std::sqrt(aa), nb = std::sqrt(bb);
  const bool degenerate = na == 0.0 || nb == 0.0;
  const double c = degenerate ? 0.0 : dot / (na * nb);
  return g.record(OpKind::kCosine, {a, b}, Tensor::scalar(c), [na, nb, c, degenerate](Graph& g, std::size_t self) {
    if (degenerate) return;
    const Node& node = g.node(self);
    const double gc = node.grad[0];
    const Tensor& A = g.value(node.inputs[0]);
    const Tensor& B = g.value(node.inputs[1]);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gc * (B[i] / (na * nb) - c * A[i] / (na * na));
    });
    with_input_grad(g, self, 1, [&](Tensor& gb, const Tensor&) {
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += gc * (A[i] / (na * nb) - c * B[i] / (nb * nb));
    });
  });
}

Var cross_entropy(Var logits, std::size_t target) {
  Graph& g = logits.graph();
  const Tensor& z = logits.value();
  shape_check(z.rows() == 1, g, OpKind::kCrossEntropy, "expects a single row of logits, got " + dims(z));
  shape_check(target < z.cols(), g, OpKind::kCrossEntropy,
              "target class " + std::to_string(target) + " out of range");
  const double mx = *std::max_element(z.values().begin(), z.values().end());
  double total = 0.0;
  for (double v : z.values()) total += std::exp(v - mx);
  const double lse = mx + std::log(total);
  std::vector<double> probs(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) probs[i] = std::exp(z[i] - lse);
  return g.record(OpKind::kCrossEntropy, {logits}, Tensor::scalar(lse - z[target]),
                  [probs, target](Graph& g, std::size_t self) {
                    const double gl = g.node(self).grad[0];
                    with_input_grad(g, self, 0, [&](Tensor& gz, const Tensor&) {
                      for (std::size_t i = 0; i < probs.size(); ++i) {
                        gz[i] += gl * (probs[i] - (i == target ? 1.0 : 0.0));
                      }
                    });
                  });
}

Var dropout(Var a, double rate, Rng& rng) {
  if (rate <= 0.0) return a;
  if (rate >= 1.0) throw Error("dropout rate must be in [0, 1)");
  Graph& g = a.graph();
  const double keep = 1.0 / (1.0 - rate);
  std::vector<double> mask(a.value().size());
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep;
  Tensor out = a.value();
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] *= mask[i];
  return g.record(OpKind::kDropout, {a}, std::move(out), [mask](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    with_input_grad(g, self, 0, [&](Tensor& ga, const Tensor&) {
      for (std::size_t i = 0; i < mask.size(); ++i) ga[i] += node.grad[i] * mask[i];
    });
  });
}

namespace {

struct LstmCache {
  std::size_t steps = 0;
  std::size_t hidden = 0;
  std::size_t input = 0;
  bool reverse = false;
  std::vector<double> gates;   // steps x 4h, post-activation (i, f, g, o)
  std::vector<double> cells;   // steps x h
  std::vector<double> tanh_c;  // steps x h
};

}  // namespace

Var lstm(Var x, Var w_ih, Var w_hh, Var bias, bool reverse) {
  Graph& g = x.graph();
  const Tensor& X = x.value();
  const Tensor& Wih = w_ih.value();
  const Tensor& Whh = w_hh.value();
  const Tensor& B = bias.value();
  const std::size_t h = Whh.cols();
  const std::size_t T = X.rows(), d = X.cols();
  shape_check(Whh.rows() == 4 * h, g, OpKind::kLstm, "w_hh must be 4h x h, got " + dims(Whh));
  shape_check(Wih.rows() == 4 * h && Wih.cols() == d, g, OpKind::kLstm,
              "w_ih must be " + std::to_string(4 * h) + "x" + std::to_string(d) + ", got " + dims(Wih));
  shape_check(B.size() == 4 * h, g, OpKind::kLstm, "bias must have " + std::to_string(4 * h) + " entries");

  auto cache = std::make_shared<LstmCache>();
  cache->steps = T;
  cache->hidden = h;
  cache->input = d;
  cache->reverse = reverse;
  cache->gates.assign(T * 4 * h, 0.0);
  cache->cells.assign(T * h, 0.0);
  cache->tanh_c.assign(T * h, 0.0);

  std::vector<double> z(T * 4 * h, 0.0);
  gemm_nt(X.values().data(), Wih.values().data(), z.data(), T, d, 4 * h);

  Tensor out = Tensor::matrix(T, h);
  for (std::size_t s = 0; s < T; ++s) {
    const std::size_t t = reverse ? T - 1 - s : s;
    double* zt = z.data() + t * 4 * h;
    for (std::size_t j = 0; j < 4 * h; ++j) zt[j] += B[j];
    const double* h_prev = nullptr;
    const double* c_prev = nullptr;
    if (s > 0) {
      const std::size_t p = reverse ? t + 1 : t - 1;
      h_prev = out.values().data() + p * h;
      c_prev = cache->cells.data() + p * h;
      gemm_nt(h_prev, Whh.values().data(), zt, 1, h, 4 * h);
    }
    double* gt = cache->gates.data() + t * 4 * h;
    for (std::size_t j = 0; j < h; ++j) {
      gt[j] = sigmoid_scalar(zt[j]);
      gt[h + j] = sigmoid_scalar(zt[h + j]);
      gt[2 * h + j] = std::tanh(zt[2 * h + j]);
      gt[3 * h + j] = sigmoid_scalar(zt[3 * h + j]);
      const double c = (c_prev ? gt[h + j] * c_prev[j] : 0.0) + gt[j] * gt[2 * h + j];
      cache->cells[t * h + j] = c;
      const double tc = std::tanh(c);
      cache->tanh_c[t * h + j] = tc;
      out(t, j) = gt[3 * h + j] * tc;
    }
  }

  return g.record(OpKind::kLstm, {x, w_ih, w_hh, bias}, std::move(out), [cache](Graph& g, std::size_t self) {
    const Node& node = g.node(self);
    const std::size_t T = cache->steps, h = cache->hidden, d = cache->input;
    const bool rev = cache->reverse;
    const Tensor& X = g.value(node.inputs[0]);
    const Tensor& Wih = g.value(node.inputs[1]);
    const Tensor& Whh = g.value(node.inputs[2]);
    const Tensor& H = node.value;
    const Tensor& G = node.grad;

    std::vector<double> dz(T * 4 * h, 0.0);
    std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0);
    for (std::size_t s = T; s-- > 0;) {
      const std::size_t t = rev ? T - 1 - s : s;
      const bool has_prev = s > 0;
      const std::size_t p = has_prev ? (rev ? t + 1 : t - 1) : 0;
      const double* gt = cache->gates.data() + t * 4 * h;
      double* dzt = dz.data() + t * 4 * h;
      for (std::size_t j = 0; j < h; ++j) {
        const double i_g = gt[j], f_g = gt[h + j], c_g = gt[2 * h + j], o_g = gt[3 * h + j];
        const double tc = cache->tanh_c[t * h + j];
        const double c_prev = has_prev ? cache->cells[p * h + j] : 0.0;
        const double dh = G(t, j) + dh_next[j];
        const double d_o = dh * tc;
        const double dc = dh * o_g * (1.0 - tc * tc) + dc_next[j];
        dzt[j] = dc * c_g * i_g * (1.0 - i_g);
        dzt[h + j] = dc * c_prev * f_g * (1.0 - f_g);
        dzt[2 * h + j] = dc * i_g * (1.0 - c_g * c_g);
        dzt[3 * h + j] = d_o * o_g * (1.0 - o_g);
        dc_next[j] = dc * f_g;
      }
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      if (has_prev) gemm_nn(dzt, Whh.values().data(), dh_next.data(), 1, 4 * h, h);
    }

    with_input_grad(g, self, 0, [&](Tensor& gx, const Tensor&) {
      gemm_nn(dz.data(), Wih.values().data(), gx.values().data(), T, 4 * h, d);
    });
    with_input_grad(g, self, 1, [&](Tensor& gw, const Tensor&) {
      gemm_tn(dz.data(), X.values().data(), gw.values().data(), T, 4 * h, d);
    });
    with_input_grad(g, self, 2, [&](Tensor& gw, const Tensor&) {
      for (std::size_t s = 1; s < T; ++s) {
        const std::size_t t = rev ? T - 1 - s : s;
        const std::size_t p = rev ? t + 1 : t - 1;
        gemm_tn(dz.data() + t * 4 * h, H.values().data() + p * h, gw.values().data(), 1, 4 * h, h);
      }
    });
    with_input_grad(g, self, 3, [&](Tensor& gb, const Tensor&) {
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < 4 * h; ++j) gb[j] += dz[t * 4 * h + j];
    });
  });
}

}  // namespace factpipe::numerics
