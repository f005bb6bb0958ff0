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

#include "factpipe/numerics/graph.h"

#include "factpipe/common/error.h"

namespace factpipe::numerics {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kConstant: return "constant";
    case OpKind::kParam: return "param";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kMatMulNT: return "matmul_nt";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kAddRow: return "add_row";
    case OpKind::kScale: return "scale";
    case OpKind::kAddScalar: return "add_scalar";
    case OpKind::kScaleBy: return "scale_by";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kRelu: return "relu";
    case OpKind::kSoftmaxRows: return "softmax_rows";
    case OpKind::kConcatCols: return "concat_cols";
    case OpKind::kConcatRows: return "concat_rows";
    case OpKind::kSliceCols: return "slice_cols";
    case OpKind::kSliceRows: return "slice_rows";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kSum: return "sum";
    case OpKind::kSumRows: return "sum_rows";
    case OpKind::kMeanRows: return "mean_rows";
    case OpKind::kMaxRows: return "max_rows";
    case OpKind::kCosine: return "cosine";
    case OpKind::kCrossEntropy: return "cross_entropy";
    case OpKind::kDropout: return "dropout";
    case OpKind::kLstm: return "lstm";
  }
  return "?";
}

const Tensor& Var::value() const { return graph_->value(id_); }
const Tensor& Var::grad() const { return graph_->grad_buffer(id_); }

std::string Graph::next_label(OpKind kind) const {
  return "node #" + std::to_string(nodes_.size()) + " (" + op_name(kind) + ")";
}

Var Graph::input(const std::string& name, Tensor value) {
  if (inputs_.count(name)) throw Error("duplicate graph input '" + name + "'");
  Var v = record(OpKind::kInput, {}, std::move(value), nullptr);
  inputs_[name] = v.id();
  return v;
}

Var Graph::constant(Tensor value) { return record(OpKind::kConstant, {}, std::move(value), nullptr); }

Var Graph::param(ParamSet& set, const std::string& name) {
  Param& p = set.param(name);
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  Var v = record(OpKind::kParam, {}, p.value, nullptr);
  nodes_[v.id()].requires_grad = true;
  nodes_[v.id()].param = &p;
  param_nodes_[&p] = v.id();
  return v;
}

Var Graph::record(OpKind kind, std::vector<Var> inputs, Tensor value, Node::Backward backward) {
  Node node;
  node.kind = kind;
  node.value = std::move(value);
  node.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    if (&in.graph() != this) throw Error(next_label(kind) + ": input belongs to another graph");
    node.inputs.push_back(in.id());
    node.requires_grad = node.requires_grad || nodes_[in.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Tensor& Graph::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() != n.value.size()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Graph::backward(Var loss) {
  if (&loss.graph() != this) throw Error("backward: loss belongs to another graph");
  const Node& root = nodes_[loss.id()];
  if (root.value.size() != 1) {
    throw ShapeError("backward: loss node #" + std::to_string(loss.id()) + " is not scalar, shape " +
                     shape_string(root.value.shape()));
  }
  for (std::size_t i = 0; i <= loss.id(); ++i) {
    if (nodes_[i].grad.size()) nodes_[i].grad.fill(0.0);
  }
  grad_buffer(loss.id())[0] = 1.0;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.param) {
      auto dst = n.param->grad.values();
      auto src = n.grad.values();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    } else if (n.backward) {
      n.backward(*this, i);
    }
  }
}

}  // namespace factpipe::numerics
