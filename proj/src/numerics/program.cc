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

#include "factpipe/numerics/program.h"

#include <algorithm>
#include <cmath>

#include "factpipe/common/error.h"

namespace factpipe::numerics {
namespace {

NamedVars bind_inputs(Graph& g, const Program& program, const NamedTensors& inputs) {
  NamedVars vars;
  for (const auto& [name, shape] : program.inputs) {
    auto it = inputs.find(name);
    if (it == inputs.end()) throw ShapeError("missing program input '" + name + "'");
    if (it->second.shape() != shape) {
      throw ShapeError("input '" + name + "' has shape " + shape_string(it->second.shape()) + ", declared " +
                       shape_string(shape));
    }
    vars[name] = g.input(name, it->second);
  }
  for (const auto& [name, _] : inputs) {
    if (!program.inputs.count(name)) throw ShapeError("undeclared program input '" + name + "'");
  }
  return vars;
}

Var find_output(const NamedVars& outputs, const std::string& name) {
  auto it = outputs.find(name);
  if (it == outputs.end()) throw NotFoundError("program has no output '" + name + "'");
  return it->second;
}

double evaluate_loss(const Program& program, const NamedTensors& inputs, const std::string& loss) {
  Graph g;
  NamedVars outputs = program.body(g, bind_inputs(g, program, inputs));
  return find_output(outputs, loss).value().item();
}

}  // namespace

NamedTensors forward(const Program& program, const NamedTensors& inputs) {
  Graph g;
  NamedVars outputs = program.body(g, bind_inputs(g, program, inputs));
  NamedTensors result;
  for (const auto& [name, var] : outputs) result[name] = var.value();
  return result;
}

GradcheckResult gradcheck(const Program& program, ParamSet& params, const NamedTensors& inputs,
                          const std::string& loss, double epsilon, double tolerance) {
  params.zero_grad();
  {
    Graph g;
    NamedVars outputs = program.body(g, bind_inputs(g, program, inputs));
    g.backward(find_output(outputs, loss));
  }
  GradcheckResult result;
  for (auto& [name, p] : params) {
    const Tensor analytic = p.grad;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + epsilon;
      const double up = evaluate_loss(program, inputs, loss);
      p.value[i] = saved - epsilon;
      const double down = evaluate_loss(program, inputs, loss);
      p.value[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double err =
          std::abs(analytic[i] - numeric) / std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_param = name;
        result.worst_index = i;
      }
    }
  }
  result.passed = result.max_relative_error < tolerance;
  return result;
}

}  // namespace factpipe::numerics
