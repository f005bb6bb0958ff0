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

#ifndef FACTPIPE_NUMERICS_GRAPH_H_
#define FACTPIPE_NUMERICS_GRAPH_H_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "factpipe/numerics/params.h"
#include "factpipe/numerics/tensor.h"

namespace factpipe::numerics {

enum class OpKind {
  kInput,
  kConstant,
  kParam,
  kMatMul,
  kMatMulNT,
  kAdd,
  kSub,
  kMul,
  kAddRow,
  kScale,
  kAddScalar,
  kScaleBy,
  kSigmoid,
  kTanh,
  kRelu,
  kSoftmaxRows,
  kConcatCols,
  kConcatRows,
  kSliceCols,
  kSliceRows,
  kTranspose,
  kSum,
  kSumRows,
  kMeanRows,
  kMaxRows,
  kCosine,
  kCrossEntropy,
  kDropout,
  kLstm,
};

const char* op_name(OpKind kind);

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, std::size_t id) : graph_(graph), id_(id) {}

  Graph& graph() const { return *graph_; }
  std::size_t id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }

  const Tensor& value() const;
  // Gradient of the last backward() loss with respect to this node.
  const Tensor& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

 private:
  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
};

// One operation record. Inputs always have smaller ids than the node itself.
struct Node {
  using Backward = std::function<void(Graph&, std::size_t self)>;

  OpKind kind = OpKind::kConstant;
  std::vector<std::size_t> inputs;
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  Param* param = nullptr;
  // Propagates grad into the inputs' grads; captures whatever locals the
  // forward pass cached.
  Backward backward;
};

// Define-by-run tape. Operations evaluate eagerly as they are recorded, so the
// node list is topologically ordered by construction.
//
// A graph is single-threaded. Parameters are read at param() time; backward()
// accumulates into Param::grad of the owning ParamSet.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Named, non-differentiable input.
  Var input(const std::string& name, Tensor value);
  Var constant(Tensor value);
  // Leaf bound to a parameter. Repeated calls for the same parameter return
  // the same node.
  Var param(ParamSet& set, const std::string& name);

  // Records an operation. Used by the op library; `backward` may be empty for
  // nodes that never need gradients.
  Var record(OpKind kind, std::vector<Var> inputs, Tensor value, Node::Backward backward);

  // Runs reverse-mode differentiation from a single-element `loss`.
  // Throws ShapeError for non-scalar losses.
  void backward(Var loss);

  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  // Gradient buffer of a node, allocated on first use.
  Tensor& grad_buffer(std::size_t id);
  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Prefix "node #N (op)" used in error messages for the next node.
  std::string next_label(OpKind kind) const;

 private:
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> inputs_;
  std::map<const Param*, std::size_t> param_nodes_;
};

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_GRAPH_H_
