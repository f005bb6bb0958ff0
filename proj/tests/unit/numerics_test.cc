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


#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "catch_amalgamated.hpp"
#include "factpipe/common/error.h"
#include "factpipe/common/rng.h"
#include "factpipe/numerics/graph.h"
#include "factpipe/numerics/layers.h"
#include "factpipe/numerics/ops.h"
#include "factpipe/numerics/optim.h"
#include "factpipe/numerics/params.h"
#include "factpipe/numerics/program.h"
#include "factpipe/numerics/tensor.h"
#include "fixtures.h"
#include "gradcheck_cases.h"

namespace factpipe::numerics {
namespace {

#include "oracle_models.inc"

using testing::random_tensor;

using testing::kGradcheckTol;
using testing::op_cases;
using testing::op_gradcheck;
using testing::OpCase;

TEST_CASE("every differentiable op passes gradcheck at ten seeded points", "[numerics][gradcheck]") {
  for (const OpCase& c : op_cases()) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      INFO(c.name << " seed " << seed);
      CHECK(op_gradcheck(c, seed) < kGradcheckTol);
    }
  }
}

TEST_CASE("linear layer gradcheck with eps 1e-5", "[numerics][gradcheck]") {
  ParamSet params(3);
  Linear layer = Linear::create(params, "lin", 3, 2);
  Program program;
  program.inputs["x"] = {1, 3};
  program.body = [&](Graph& g, const NamedVars& in) {
    return NamedVars{{"loss", sum(tanh(layer(g, params, in.at("x"))))}};
  };
  Rng rng(3);
  auto result = gradcheck(program, params, {{"x", random_tensor(rng, {1, 3})}}, "loss", 1e-5, 1e-6);
  CHECK(result.max_relative_error < 1e-6);
}

TEST_CASE("single LSTM cell gradcheck with eps 1e-5", "[numerics][gradcheck]") {
  ParamSet params(4);
  LstmLayer cell = LstmLayer::create(params, "cell", 3, 2);
  Program program;
  program.inputs["x"] = {1, 3};
  program.body = [&](Graph& g, const NamedVars& in) {
    return NamedVars{{"loss", sum(cell(g, params, in.at("x"), false))}};
  };
  Rng rng(4);
  auto result = gradcheck(program, params, {{"x", random_tensor(rng, {1, 3})}}, "loss", 1e-5, 1e-4);
  CHECK(result.max_relative_error < 1e-4);
}

TEST_CASE("identity graph has zero gradcheck error", "[numerics][gradcheck]") {
  ParamSet params;
  params.adopt("x", Tensor::vector({0.3, -0.2, 0.9}));
  Program program;
  program.body = [&](Graph& g, const NamedVars&) { return NamedVars{{"loss", sum(g.param(params, "x"))}}; };
  auto result = gradcheck(program, params, {}, "loss", 1e-5, 1e-12);
  CHECK(result.max_relative_error < 1e-9);
}

TEST_CASE("tensor construction checks shape and finiteness", "[numerics][tensor]") {
  CHECK_THROWS_AS(Tensor({2, 2}, {1, 2, 3}), ShapeError);
  Tensor t = Tensor::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t(1, 2) == 6);
  CHECK(Tensor::vector({1, 2}).rows() == 1);

  set_checked_mode(true);
  CHECK_THROWS_AS(Tensor::vector({1.0, std::nan("")}), FormatError);
  CHECK_THROWS_AS(Tensor::vector({INFINITY}), FormatError);
  set_checked_mode(false);
  CHECK_NOTHROW(Tensor::vector({INFINITY}));
  set_checked_mode(true);
}

TEST_CASE("forward examples", "[numerics][forward]") {
  Graph g;
  ParamSet params;
  params.adopt("lin.W", Tensor::identity(2));
  params.adopt("lin.b", Tensor::vector({0, 0}));
  Linear layer = Linear::bind(params, "lin");
  Var y = layer(g, params, g.input("x", Tensor::vector({3, -1})));
  CHECK(std::vector<double>(y.value().values().begin(), y.value().values().end()) == std::vector<double>{3, -1});

  Var s = softmax_rows(g.input("z", Tensor::vector({0, 0})));
  CHECK(s.value()[0] == 0.5);
  CHECK(s.value()[1] == 0.5);
}

TEST_CASE("shape errors name the node", "[numerics][forward]") {
  Graph g;
  Var a = g.input("a", Tensor::matrix(2, 3));
  Var b = g.input("b", Tensor::matrix(2, 3));
  try {
    matmul(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("matmul") != std::string::npos);
    CHECK(std::string(e.what()).find("node #2") != std::string::npos);
  }
}

TEST_CASE("program input declarations are enforced", "[numerics][forward]") {
  Program program;
  program.inputs["x"] = {1, 2};
  program.body = [](Graph&, const NamedVars& in) { return NamedVars{{"y", in.at("x")}}; };
  CHECK_THROWS_AS(forward(program, {{"x", Tensor::matrix(2, 2)}}), ShapeError);
  CHECK_THROWS_AS(forward(program, {}), ShapeError);
  CHECK_THROWS_AS(forward(program, {{"x", Tensor::matrix(1, 2)}, {"z", Tensor::scalar(1)}}), ShapeError);
}

TEST_CASE("forward is bit-deterministic", "[numerics][forward]") {
  ParamSet params(11);
  BiLstm enc = BiLstm::create(params, "enc", 3, 4);
  Program program;
  program.inputs["x"] = {3, 3};
  program.body = [&](Graph& g, const NamedVars& in) { return NamedVars{{"h", enc.encode(g, params, in.at("x"))}}; };
  Rng rng(5);
  NamedTensors inputs{{"x", random_tensor(rng, {3, 3})}};
  CHECK(forward(program, inputs).at("h") == forward(program, inputs).at("h"));
}

TEST_CASE("backward examples", "[numerics][backward]") {
  ParamSet params;
  params.adopt("x", Tensor::matrix(2, 3, {1, -2, 3, 0.5, 0, 7}));
  params.adopt("v", Tensor::vector({1, 2}));
  {
    Graph g;
    g.backward(sum(g.param(params, "x")));
    for (double v : params.param("x").grad.values()) CHECK(v == 1.0);
  }
  params.zero_grad();
  {
    Graph g;
    Var v = g.param(params, "v");
    g.backward(scale(sum(mul(v, v)), 0.5));
    CHECK(params.param("v").grad[0] == 1.0);
    CHECK(params.param("v").grad[1] == 2.0);
  }
  {
    Graph g;
    Var x = g.param(params, "x");
    CHECK_THROWS_AS(g.backward(x), ShapeError);
  }
}

TEST_CASE("backward gives every reachable parameter a same-shape gradient", "[numerics][backward]") {
  ParamSet params(2);
  BiLstm enc = BiLstm::create(params, "enc", 2, 3);
  Linear head = Linear::create(params, "head", 12, 1);
  Graph g;
  Rng rng(2);
  Var x = g.input("x", random_tensor(rng, {4, 2}));
  g.backward(sum(head(g, params, pool_avg_max(enc.encode(g, params, x)))));
  for (const auto& [name, p] : params) {
    INFO(name);
    CHECK(p.grad.shape() == p.value.shape());
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t input : g.node(i).inputs) CHECK(input < i);
  }
}

TEST_CASE("softmax rows sum to one and stay positive", "[numerics][property]") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g;
    Tensor z = random_tensor(rng, {3, 5});
    for (double& v : z.values()) v *= 20.0;
    Var s = softmax_rows(g.input("z", z));
    for (std::size_t r = 0; r < 3; ++r) {
      double total = 0.0;
      for (double v : s.value().row(r)) {
        CHECK(v > 0.0);
        total += v;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("pool_avg_max examples and permutation invariance", "[numerics][property]") {
  Graph g;
  Var p = pool_avg_max(g.input("a", Tensor::from_rows({{1, 2}, {3, 4}})));
  CHECK(p.value() == Tensor::vector({2, 3, 3, 4}));
  Var single = pool_avg_max(g.input("b", Tensor::from_rows({{5, -1}})));
  CHECK(single.value() == Tensor::vector({5, -1, 5, -1}));

  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor a = random_tensor(rng, {4, 3});
    std::vector<std::size_t> order{0, 1, 2, 3};
    rng.shuffle(order);
    Tensor b = Tensor::matrix(4, 3);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 3; ++c) b(r, c) = a(order[r], c);
    Tensor pa = pool_avg_max(g.input("pa" + std::to_string(trial), a)).value();
    Tensor pb = pool_avg_max(g.input("pb" + std::to_string(trial), b)).value();
    REQUIRE(pa.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(pa[i] == Catch::Approx(pb[i]).epsilon(1e-15));
  }
}

TEST_CASE("sgd_step examples", "[numerics][optim]") {
  ParamSet params;
  params.adopt("p", Tensor::vector({1}));
  sgd_step(params, {{"p", Tensor::vector({2})}}, 0.5);
  CHECK(params.value("p")[0] == 0.0);

  params.mutable_value("p")[0] = 3.0;
  sgd_step(params, {{"p", Tensor::vector({0})}}, 0.5);
  CHECK(params.value("p")[0] == 3.0);

  CHECK_THROWS_AS(sgd_step(params, {{"p", Tensor::vector({1, 2})}}, 0.5), ShapeError);

  params.mutable_value("p")[0] = 1.0;
  for (int step = 0; step < 2; ++step) {
    // loss 0.5 p^2 has gradient p
    sgd_step(params, {{"p", params.value("p")}}, 0.1);
  }
  CHECK(params.value("p")[0] == Catch::Approx(0.81).epsilon(1e-15));
}

TEST_CASE("Sgd optimizer matches sgd_step", "[numerics][optim]") {
  ParamSet params;
  params.adopt("p", Tensor::vector({1}));
  OptimizerConfig config;
  config.kind = OptimizerConfig::Kind::kSgd;
  config.lr = 0.1;
  auto opt = make_optimizer(config);
  for (int step = 0; step < 2; ++step) {
    params.zero_grad();
    Graph g;
    Var p = g.param(params, "p");
    g.backward(scale(mul(p, p), 0.5));
    opt->step(params);
  }
  CHECK(params.value("p")[0] == Catch::Approx(0.81).epsilon(1e-15));
}

TEST_CASE("Adam first step moves each weight by about lr", "[numerics][optim]") {
  ParamSet params;
  params.adopt("p", Tensor::vector({1.0, -2.0, 0.0}));
  params.param("p").grad = Tensor::vector({0.3, -5.0, 0.0});
  Adam adam(OptimizerConfig{});
  adam.step(params);
  CHECK(params.value("p")[0] == Catch::Approx(1.0 - 1e-3).epsilon(1e-9));
  CHECK(params.value("p")[1] == Catch::Approx(-2.0 + 1e-3).epsilon(1e-9));
  CHECK(params.value("p")[2] == 0.0);
}

TEST_CASE("Adam minimizes a quadratic", "[numerics][optim]") {
  ParamSet params;
  params.adopt("p", Tensor::vector({2.0, -1.0}));
  OptimizerConfig config;
  config.lr = 0.05;
  Adam adam(config);
  for (int step = 0; step < 500; ++step) {
    params.zero_grad();
    Graph g;
    Var p = g.param(params, "p");
    g.backward(sum(mul(p, p)));
    adam.step(params);
  }
  CHECK(std::abs(params.value("p")[0]) < 1e-2);
  CHECK(std::abs(params.value("p")[1]) < 1e-2);
}

TEST_CASE("gradient clipping rescales the joint norm", "[numerics][optim]") {
  ParamSet params;
  params.adopt("a", Tensor::vector({0.0}));
  params.adopt("b", Tensor::vector({0.0}));
  params.param("a").grad = Tensor::vector({3.0});
  params.param("b").grad = Tensor::vector({4.0});
  OptimizerConfig config;
  config.kind = OptimizerConfig::Kind::kSgd;
  config.lr = 1.0;
  config.clip_norm = 1.0;
  Sgd(config).step(params);
  CHECK(params.value("a")[0] == Catch::Approx(-0.6));
  CHECK(params.value("b")[0] == Catch::Approx(-0.8));
}

TEST_CASE("param set names are unique and checkpoints round-trip", "[numerics][params]") {
  ParamSet params(42);
  BiLstm::create(params, "enc", 3, 2);
  Linear::create(params, "out", 4, 1);
  CHECK_THROWS_AS(params.create("out.W", {1, 4}), Error);
  // forget gate bias starts at 1
  const Tensor& b = params.value("enc.fwd.b");
  for (std::size_t i = 0; i < 8; ++i) CHECK(b[i] == (i >= 2 && i < 4 ? 1.0 : 0.0));

  testing::TempDir dir;
  params.save(dir / "p.params");
  std::ifstream in(dir / "p.params");
  std::string magic;
  std::getline(in, magic);
  CHECK(magic == kCheckpointMagic);
  ParamSet loaded = ParamSet::load(dir / "p.params");
  CHECK(loaded.seed() == 42);
  CHECK(loaded.names() == params.names());
  CHECK(loaded.checksum() == params.checksum());
  for (const auto& name : params.names()) CHECK(loaded.value(name) == params.value(name));
}

TEST_CASE("bad checkpoints are rejected", "[numerics][params]") {
  testing::TempDir dir;
  {
    std::ofstream out(dir / "bad.params");
    out << "NOT-A-CHECKPOINT\n";
  }
  CHECK_THROWS_AS(ParamSet::load(dir / "bad.params"), FormatError);
  CHECK_THROWS_AS(ParamSet::load(dir / "missing.params"), IoError);
}

TEST_CASE("bilstm rejects an empty sequence", "[numerics][bilstm]") {
  ParamSet params;
  BiLstm enc = BiLstm::create(params, "enc", 2, 2);
  Graph g;
  CHECK_THROWS_AS(enc.encode(g, params, g.input("x", Tensor(Shape{0, 2}))), ShapeError);
}

TEST_CASE("bilstm with zero parameters outputs zeros", "[numerics][bilstm]") {
  ParamSet params;
  BiLstm enc = BiLstm::create(params, "enc", 3, 2);
  for (auto& [name, p] : params) p.value.fill(0.0);
  Graph g;
  Rng rng(1);
  Var h = enc.encode(g, params, g.input("x", random_tensor(rng, {4, 3})));
  CHECK(h.value().shape() == Shape{4, 4});
  for (double v : h.value().values()) CHECK(v == 0.0);
}

TEST_CASE("bilstm on one token runs both directions on the same step", "[numerics][bilstm]") {
  ParamSet params(8);
  BiLstm enc = BiLstm::create(params, "enc", 3, 2);
  // make both directions identical
  for (const char* w : {".W_ih", ".W_hh", ".b"}) {
    params.mutable_value(std::string("enc.bwd") + w) = params.value(std::string("enc.fwd") + w);
  }
  Graph g;
  Var h = enc.encode(g, params, g.input("x", Tensor::from_rows({{0.2, -0.4, 0.9}})));
  CHECK(h.value()(0, 0) == h.value()(0, 2));
  CHECK(h.value()(0, 1) == h.value()(0, 3));
}

TEST_CASE("reversed input swaps the directional halves", "[numerics][bilstm]") {
  ParamSet params(13);
  LstmLayer layer = LstmLayer::create(params, "l", 3, 2);
  Rng rng(13);
  Tensor x = random_tensor(rng, {4, 3});
  Tensor reversed = Tensor::matrix(4, 3);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 3; ++c) reversed(r, c) = x(3 - r, c);
  Graph g;
  Tensor fwd_on_reversed = layer(g, params, g.input("r", reversed), false).value();
  Tensor bwd_on_original = layer(g, params, g.input("x", x), true).value();
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(fwd_on_reversed(t, j) == bwd_on_original(3 - t, j));
  }
}

TEST_CASE("bilstm matches the torch reference", "[numerics][oracle]") {
  ParamSet params;
  BiLstm enc = BiLstm::create(params, "enc", 3, 2);
  testing::fill_sine(params);
  Graph g;
  Var h = enc.encode(g, params, g.input("x", testing::claim_input(3, 3)));
  REQUIRE(h.value().size() == kBilstmOut.size());
  for (std::size_t i = 0; i < kBilstmOut.size(); ++i) CHECK(h.value()[i] == Catch::Approx(kBilstmOut[i]).margin(1e-12));
}

std::string format_tensor(const Tensor& t) {
  std::ostringstream out;
  out << shape_string(t.shape());
  char buf[40];
  for (double v : t.values()) {
    std::snprintf(buf, sizeof buf, " %a", v);
    out << buf;
  }
  out << "\n";
  return out.str();
}

TEST_CASE("two-step LSTM replays its golden snapshot", "[numerics][golden]") {
  ParamSet params(0);
  LstmLayer layer = LstmLayer::create(params, "lstm", 3, 4);
  Rng rng(0);
  Tensor x = random_tensor(rng, {2, 3});
  Graph g;
  const std::string actual = format_tensor(layer(g, params, g.input("x", x), false).value());

  const auto path = testing::fixture_dir() / "golden" / "lstm_two_step.txt";
  const char* update = std::getenv("FACTPIPE_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    std::ofstream(path) << actual;
  }
  REQUIRE(std::filesystem::exists(path));
  CHECK(testing::read_file(path) == actual);
}

}  // namespace
}  // namespace factpipe::numerics
