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

#include "factpipe/numerics/optim.h"

#include <cmath>

#include "factpipe/common/error.h"

namespace factpipe::numerics {
namespace {

// Factor applied to every gradient so the joint norm stays within clip_norm.
double clip_factor(const ParamSet& params, double clip_norm) {
  if (clip_norm <= 0.0) return 1.0;
  double total = 0.0;
  for (const auto& [_, p] : params)
    for (double g : p.grad.values()) total += g * g;
  const double norm = std::sqrt(total);
  return norm > clip_norm ? clip_norm / norm : 1.0;
}

}  // namespace

void sgd_step(ParamSet& params, const std::map<std::string, Tensor>& gradients, double lr) {
  if (!(lr > 0.0)) throw Error("sgd_step: learning rate must be positive");
  for (const auto& [name, grad] : gradients) {
    Tensor& value = params.mutable_value(name);
    if (value.shape() != grad.shape()) {
      throw ShapeError("sgd_step: gradient for '" + name + "' has shape " + shape_string(grad.shape()) +
                       ", parameter has " + shape_string(value.shape()));
    }
  }
  for (const auto& [name, grad] : gradients) {
    Tensor& value = params.mutable_value(name);
    for (std::size_t i = 0; i < value.size(); ++i) value[i] -= lr * grad[i];
  }
}

void Sgd::step(ParamSet& params) {
  const double scale = clip_factor(params, config_.clip_norm);
  for (auto& [_, p] : params)
    for (std::size_t i = 0; i < p.value.size(); ++i) p.value[i] -= config_.lr * scale * p.grad[i];
}

void Adam::step(ParamSet& params) {
  const double scale = clip_factor(params, config_.clip_norm);
  ++steps_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  for (auto& [name, p] : params) {
    auto [it, inserted] = state_.try_emplace(name);
    if (inserted) it->second = Moments{Tensor(p.value.shape()), Tensor(p.value.shape())};
    Moments& mo = it->second;
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = scale * p.grad[i];
      mo.m[i] = config_.beta1 * mo.m[i] + (1.0 - config_.beta1) * g;
      mo.v[i] = config_.beta2 * mo.v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = mo.m[i] / c1;
      const double v_hat = mo.v[i] / c2;
      p.value[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
    }
  }
}

std::unique_ptr<Optimizer> make_optimizer(const OptimizerConfig& config) {
  if (config.kind == OptimizerConfig::Kind::kSgd) return std::make_unique<Sgd>(config);
  return std::make_unique<Adam>(config);
}

}  // namespace factpipe::numerics
