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

#ifndef FACTPIPE_NUMERICS_PROGRAM_H_
#define FACTPIPE_NUMERICS_PROGRAM_H_

#include <functional>
#include <map>
#include <string>

#include "factpipe/numerics/graph.h"
#include "factpipe/numerics/params.h"

namespace factpipe::numerics {

using NamedTensors = std::map<std::string, Tensor>;
using NamedVars = std::map<std::string, Var>;

// A graph recipe with declared input names and shapes. Every evaluation
// records a fresh Graph.
struct Program {
  std::map<std::string, Shape> inputs;
  std::function<NamedVars(Graph&, const NamedVars&)> body;
};

// Builds and evaluates the program. Throws ShapeError when `inputs` does not
// match the declaration.
NamedTensors forward(const Program& program, const NamedTensors& inputs);

struct GradcheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  bool passed = true;
};

// Compares backward() against central differences for every scalar of every
// parameter in `params`. The relative error of one entry is
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
// `loss` names a single-element program output.
GradcheckResult gradcheck(const Program& program, ParamSet& params, const NamedTensors& inputs,
                          const std::string& loss, double epsilon, double tolerance);

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_PROGRAM_H_
