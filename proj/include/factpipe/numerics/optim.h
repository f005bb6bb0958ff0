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

#ifndef FACTPIPE_NUMERICS_OPTIM_H_
#define FACTPIPE_NUMERICS_OPTIM_H_

#include <map>
#include <memory>
#include <string>

#include "factpipe/numerics/params.h"

namespace factpipe::numerics {

// p <- p - lr * g for every named gradient. Throws ShapeError when a gradient
// does not match its parameter, NotFoundError for unknown names.
void sgd_step(ParamSet& params, const std::map<std::string, Tensor>& gradients, double lr);

struct OptimizerConfig {
  enum class Kind { kAdam, kSgd };
  Kind kind = Kind::kAdam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Rescales the joint gradient to this L2 norm when larger; 0 disables.
  double clip_norm = 0.0;
};

// Applies the accumulated Param::grad of a ParamSet and leaves the gradients
// untouched; callers zero them.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(ParamSet& params) = 0;
};

class Sgd : public Optimizer {
 public:
  explicit Sgd(OptimizerConfig config) : config_(config) {}
  void step(ParamSet& params) override;

 private:
  OptimizerConfig config_;
};

class Adam : public Optimizer {
 public:
  explicit Adam(OptimizerConfig config) : config_(config) {}
  void step(ParamSet& params) override;

 private:
  struct Moments {
    Tensor m;
    Tensor v;
  };
  OptimizerConfig config_;
  std::map<std::string, Moments> state_;
  long steps_ = 0;
};

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config);

}  // namespace factpipe::numerics

#endif  // FACTPIPE_NUMERICS_OPTIM_H_
