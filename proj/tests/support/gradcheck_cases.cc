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

#include "gradcheck_cases.h"

#include "factpipe/common/rng.h"
#include "factpipe/esim/esim.h"
#include "factpipe/numerics/layers.h"
#include "factpipe/numerics/ops.h"
#include "factpipe/numerics/params.h"
#include "factpipe/numerics/program.h"
#include "fixtures.h"

namespace factpipe::testing {

using namespace numerics;

std::vector<OpCase> op_cases() {
  auto away_from_zero = [](Tensor& t) {
    for (double& v : t.values()) v = v < 0 ? v - 0.1 : v + 0.1;
  };
  return {
      {"matmul", {{2, 3}, {3, 4}}, [](Graph&, const auto& x) { return matmul(x[0], x[1]); }},
      {"matmul_nt", {{2, 3}, {4, 3}}, [](Graph&, const auto& x) { return matmul_nt(x[0], x[1]); }},
      {"add", {{2, 3}, {2, 3}}, [](Graph&, const auto& x) { return add(x[0], x[1]); }},
      {"sub", {{2, 3}, {2, 3}}, [](Graph&, const auto& x) { return sub(x[0], x[1]); }},
      {"mul", {{2, 3}, {2, 3}}, [](Graph&, const auto& x) { return mul(x[0], x[1]); }},
      {"add_row", {{3, 2}, {2}}, [](Graph&, const auto& x) { return add_row(x[0], x[1]); }},
      {"scale", {{2, 2}}, [](Graph&, const auto& x) { return scale(x[0], -1.7); }},
      {"add_scalar", {{2, 2}}, [](Graph&, const auto& x) { return add_scalar(x[0], 0.4); }},
      {"scale_by", {{2, 3}, {1}}, [](Graph&, const auto& x) { return scale_by(x[0], x[1]); }},
      {"sigmoid", {{2, 3}}, [](Graph&, const auto& x) { return sigmoid(x[0]); }},
      {"tanh", {{2, 3}}, [](Graph&, const auto& x) { return tanh(x[0]); }},
      {"relu", {{2, 3}}, [](Graph&, const auto& x) { return relu(x[0]); }, away_from_zero},
      {"softmax_rows", {{3, 4}}, [](Graph&, const auto& x) { return softmax_rows(x[0]); }},
      {"concat_cols", {{2, 1}, {2, 3}}, [](Graph&, const auto& x) { return concat_cols({x[0], x[1]}); }},
      {"concat_rows", {{1, 3}, {2, 3}}, [](Graph&, const auto& x) { return concat_rows({x[0], x[1]}); }},
      {"slice_cols", {{2, 4}}, [](Graph&, const auto& x) { return slice_cols(x[0], 1, 2); }},
      {"slice_rows", {{3, 2}}, [](Graph&, const auto& x) { return slice_rows(x[0], 1, 2); }},
      {"transpose", {{2, 3}}, [](Graph&, const auto& x) { return transpose(x[0]); }},
      {"sum", {{2, 3}}, [](Graph&, const auto& x) { return sum(x[0]); }},
      {"sum_rows", {{3, 2}}, [](Graph&, const auto& x) { return sum_rows(x[0]); }},
      {"mean_rows", {{3, 2}}, [](Graph&, const auto& x) { return mean_rows(x[0]); }},
      {"max_rows", {{3, 2}}, [](Graph&, const auto& x) { return max_rows(x[0]); }},
      {"cosine", {{4}, {4}}, [](Graph&, const auto& x) { return cosine(x[0], x[1]); }},
      {"cross_entropy", {{1, 3}}, [](Graph&, const auto& x) { return cross_entropy(x[0], 1); }},
      {"dropout", {{3, 3}},
       [](Graph&, const auto& x) {
         Rng mask_rng(31);  // same mask on every evaluation
         return dropout(x[0], 0.3, mask_rng);
       }},
      {"pool_avg_max", {{3, 2}}, [](Graph&, const auto& x) { return pool_avg_max(x[0]); }},
      {"lstm", {{3, 2}, {8, 2}, {8, 2}, {8}},
       [](Graph&, const auto& x) { return lstm(x[0], x[1], x[2], x[3], false); }},
      {"lstm_reverse", {{3, 2}, {8, 2}, {8, 2}, {8}},
       [](Graph&, const auto& x) { return lstm(x[0], x[1], x[2], x[3], true); }},
  };
}

double op_gradcheck(const OpCase& c, std::uint64_t seed) {
  Rng rng(seed);
  ParamSet params(seed);
  for (std::size_t i = 0; i < c.shapes.size(); ++i) {
    Tensor t = random_tensor(rng, c.shapes[i]);
    if (c.adjust) c.adjust(t);
    params.adopt("x" + std::to_string(i), std::move(t));
  }
  // Output shape from a probe forward pass.
  Tensor projection;
  {
    Graph g;
    std::vector<Var> xs;
    for (std::size_t i = 0; i < c.shapes.size(); ++i) xs.push_back(g.param(params, "x" + std::to_string(i)));
    projection = random_tensor(rng, c.op(g, xs).value().shape());
  }
  Program program;
  program.inputs["r"] = projection.shape();
  program.body = [&](Graph& g, const NamedVars& in) {
    std::vector<Var> xs;
    for (std::size_t i = 0; i < c.shapes.size(); ++i) xs.push_back(g.param(params, "x" + std::to_string(i)));
    return NamedVars{{"loss", sum(mul(c.op(g, xs), in.at("r")))}};
  };
  return gradcheck(program, params, {{"r", projection}}, "loss", kGradcheckEps, kGradcheckTol).max_relative_error;
}

namespace {

void randomize(ParamSet& params, Rng& rng) {
  for (auto& [name, p] : params)
    for (double& v : p.value.values()) v = rng.uniform(-1.0, 1.0);
}

}  // namespace

double esim_gradcheck(std::uint64_t seed, bool identity) {
  ParamSet params(seed);
  esim::EsimParams esim = esim::EsimParams::create(params, "esim", {3, 3, identity});
  Rng rng(seed);
  randomize(params, rng);
  NamedTensors inputs{{"claim", random_tensor(rng, {2, 3})},
                      {"sentence", random_tensor(rng, {3, 3})},
                      {"r", random_tensor(rng, {1, 24})}};
  Program program;
  program.inputs = {{"claim", {2, 3}}, {"sentence", {3, 3}}, {"r", {1, 24}}};
  program.body = [&](Graph& g, const NamedVars& in) {
    auto out = esim::encode_pair(g, params, esim, in.at("claim"), in.at("sentence"));
    return NamedVars{{"loss", sum(mul(out.final_hidden, in.at("r")))}};
  };
  return gradcheck(program, params, inputs, "loss", kGradcheckEps, kGradcheckTol).max_relative_error;
}

rte::RteModel toy_rte_model(std::uint64_t seed) {
  rte::RteConfig config;
  config.hidden = 2;
  config.attention_dim = 3;
  config.classifier_hidden1 = 4;
  config.classifier_hidden2 = 3;
  return rte::RteModel::create(3, config, seed);
}

double rte_gradcheck(std::uint64_t seed) {
  rte::RteModel model = toy_rte_model(seed);
  auto& params = model.params();
  Rng rng(seed);
  randomize(params, rng);
  NamedTensors inputs{
      {"claim", random_tensor(rng, {2, 3})}, {"s0", random_tensor(rng, {3, 3})}, {"s1", random_tensor(rng, {1, 3})}};
  Program program;
  program.inputs = {{"claim", {2, 3}}, {"s0", {3, 3}}, {"s1", {1, 3}}};
  const std::size_t target = seed % 3;
  program.body = [&](Graph& g, const NamedVars& in) {
    Var logits = model.logits(g, in.at("claim"), {in.at("s0"), in.at("s1")});
    return NamedVars{{"loss", cross_entropy(logits, target)}};
  };
  return gradcheck(program, params, inputs, "loss", kGradcheckEps, kGradcheckTol).max_relative_error;
}

}  // namespace factpipe::testing
