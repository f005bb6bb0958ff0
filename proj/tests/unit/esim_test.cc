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


#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "factpipe/common/error.h"
#include "factpipe/common/rng.h"
#include "factpipe/esim/esim.h"
#include "factpipe/numerics/ops.h"
#include "factpipe/numerics/program.h"
#include "fixtures.h"
#include "gradcheck_cases.h"

namespace factpipe::esim {
namespace {

#include "oracle_models.inc"

using numerics::NamedTensors;
using numerics::NamedVars;
using numerics::Program;
using numerics::Shape;
using testing::random_tensor;

void check_rows_sum_to_one(const Tensor& t) {
  for (std::size_t r = 0; r < t.rows(); ++r) {
    double total = 0.0;
    for (double v : t.row(r)) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("local inference matches a hand-computed 3x2 case", "[esim][local]") {
  const double a[3][2] = {{1.0, 0.0}, {0.5, -1.0}, {0.0, 2.0}};
  const double b[2][2] = {{0.3, 0.7}, {-1.2, 0.4}};
  Graph g;
  auto li = local_inference(g.input("a", Tensor::from_rows({{1.0, 0.0}, {0.5, -1.0}, {0.0, 2.0}})),
                            g.input("b", Tensor::from_rows({{0.3, 0.7}, {-1.2, 0.4}})));
  const Tensor& aligned = li.aligned_a.value();
  REQUIRE(aligned.shape() == Shape{3, 2});
  for (int i = 0; i < 3; ++i) {
    const double e0 = a[i][0] * b[0][0] + a[i][1] * b[0][1];
    const double e1 = a[i][0] * b[1][0] + a[i][1] * b[1][1];
    const double m = std::max(e0, e1);
    const double w0 = std::exp(e0 - m), w1 = std::exp(e1 - m);
    const double s0 = w0 / (w0 + w1), s1 = w1 / (w0 + w1);
    for (int c = 0; c < 2; ++c) {
      const double expected = s0 * b[0][c] + s1 * b[1][c];
      INFO("row " << i << " col " << c);
      CHECK(std::abs(aligned(i, c) - expected) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(expected));
    }
    CHECK(li.attention_a.value()(i, 0) == Catch::Approx(s0).epsilon(1e-15));
  }
  check_rows_sum_to_one(li.attention_a.value());
  check_rows_sum_to_one(li.attention_b.value());

  const Tensor& enhanced = li.enhanced_a.value();
  REQUIRE(enhanced.shape() == Shape{3, 8});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(enhanced(i, c) == a[i][c]);
      CHECK(enhanced(i, 2 + c) == aligned(i, c));
      CHECK(enhanced(i, 4 + c) == a[i][c] - aligned(i, c));
      CHECK(enhanced(i, 6 + c) == a[i][c] * aligned(i, c));
    }
  }
}

TEST_CASE("local inference examples", "[esim][local]") {
  Graph g;
  auto single = local_inference(g.input("a", Tensor::from_rows({{1, 2}, {3, -4}})),
                                g.input("b", Tensor::from_rows({{0.5, 0.25}})));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(single.aligned_a.value()(i, 0) == 0.5);
    CHECK(single.aligned_a.value()(i, 1) == 0.25);
  }
  auto uniform = local_inference(g.input("c", Tensor::from_rows({{1, 0}})),
                                 g.input("d", Tensor::from_rows({{0, 2}, {0, 2}})));
  CHECK(uniform.aligned_a.value()(0, 0) == 0.0);
  CHECK(uniform.aligned_a.value()(0, 1) == 2.0);

  Rng rng(5);
  auto li = local_inference(g.input("e", random_tensor(rng, {3, 4})), g.input("f", random_tensor(rng, {2, 4})));
  CHECK(li.enhanced_a.value().shape() == Shape{3, 16});
  CHECK(li.enhanced_b.value().shape() == Shape{2, 16});
  check_rows_sum_to_one(li.attention_a.value());
  check_rows_sum_to_one(li.attention_b.value());
}

TEST_CASE("attention rows sum to one on random inputs", "[esim][property]") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g;
    const std::size_t ta = 1 + rng.below(6), tb = 1 + rng.below(6), k = 1 + rng.below(8);
    Tensor a = random_tensor(rng, {ta, k}), b = random_tensor(rng, {tb, k});
    for (double& v : a.values()) v *= 5;
    auto li = local_inference(g.input("a", a), g.input("b", b));
    check_rows_sum_to_one(li.attention_a.value());
    check_rows_sum_to_one(li.attention_b.value());
  }
}

TEST_CASE("identity mode: permuting sentence rows leaves aligned claim rows unchanged", "[esim][property]") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor a = random_tensor(rng, {3, 4});
    Tensor b = random_tensor(rng, {5, 4});
    std::vector<std::size_t> order{0, 1, 2, 3, 4};
    rng.shuffle(order);
    Tensor p = Tensor::matrix(5, 4);
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 4; ++c) p(r, c) = b(order[r], c);
    ParamSet params(1);
    EsimParams esim = EsimParams::create(params, "esim", {4, 2, true});
    CHECK_FALSE(params.contains("esim.input.fwd.W_ih"));
    Graph g;
    auto original = encode_pair(g, params, esim, g.input("a", a), g.input("b", b));
    auto permuted = encode_pair(g, params, esim, g.input("a2", a), g.input("p", p));
    CHECK(original.claim_tokens.value() == a);  // identity encoding
    auto li1 = local_inference(original.claim_tokens, original.sentence_tokens);
    auto li2 = local_inference(permuted.claim_tokens, permuted.sentence_tokens);
    for (std::size_t i = 0; i < li1.aligned_a.value().size(); ++i)
      CHECK(li1.aligned_a.value()[i] == Catch::Approx(li2.aligned_a.value()[i]).margin(1e-13));
  }
}

TEST_CASE("identical statements give symmetric final halves", "[esim][encode]") {
  ParamSet params(3);
  EsimParams esim = EsimParams::create(params, "esim", {6, 3});
  Rng rng(3);
  Tensor x = random_tensor(rng, {4, 6});
  PairEncoding enc = encode_pair(x, x, params, esim);
  REQUIRE(enc.final_hidden.size() == 24);
  for (std::size_t i = 0; i < 12; ++i) CHECK(enc.final_hidden[i] == enc.final_hidden[12 + i]);
}

TEST_CASE("single-token statements", "[esim][encode]") {
  ParamSet params(4);
  EsimParams esim = EsimParams::create(params, "esim", {6, 3});
  Rng rng(4);
  PairEncoding enc = encode_pair(random_tensor(rng, {1, 6}), random_tensor(rng, {1, 6}), params, esim);
  CHECK(enc.final_hidden.size() == esim.final_dim());
  // avg and max pooling coincide over one row
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(enc.final_hidden[i] == enc.final_hidden[6 + i]);
    CHECK(enc.final_hidden[12 + i] == enc.final_hidden[18 + i]);
  }
}

TEST_CASE("encode_pair rejects empty or mis-sized statements", "[esim][encode]") {
  ParamSet params(4);
  EsimParams esim = EsimParams::create(params, "esim", {6, 3});
  Rng rng(4);
  CHECK_THROWS_AS(encode_pair(Tensor(Shape{0, 6}), random_tensor(rng, {2, 6}), params, esim), ShapeError);
  CHECK_THROWS_AS(encode_pair(random_tensor(rng, {2, 5}), random_tensor(rng, {2, 6}), params, esim), ShapeError);
}

TEST_CASE("bind recovers the architecture", "[esim][encode]") {
  ParamSet params(4);
  EsimParams made = EsimParams::create(params, "esim", {6, 3});
  EsimParams bound = EsimParams::bind(params, "esim");
  CHECK(bound.embedding_dim == 6);
  CHECK(bound.hidden == 3);
  CHECK_FALSE(bound.identity_encoding);
  Rng rng(1);
  Tensor a = random_tensor(rng, {2, 6}), b = random_tensor(rng, {3, 6});
  CHECK(encode_pair(a, b, params, made).final_hidden == encode_pair(a, b, params, bound).final_hidden);
}

TEST_CASE("encode_pair gradcheck", "[esim][gradcheck]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    INFO("seed " << seed);
    CHECK(testing::esim_gradcheck(seed, false) < testing::kGradcheckTol);
    CHECK(testing::esim_gradcheck(seed, true) < testing::kGradcheckTol);
  }
}

TEST_CASE("encode_pair matches the torch reference", "[esim][oracle]") {
  ParamSet params;
  EsimParams esim = EsimParams::create(params, "esim", {4, 3});
  testing::fill_sine(params);
  PairEncoding enc = encode_pair(testing::claim_input(2, 4), testing::sentence_input(3, 4), params, esim);
  REQUIRE(enc.final_hidden.size() == kEsimFinal.size());
  for (std::size_t i = 0; i < kEsimFinal.size(); ++i)
    CHECK(enc.final_hidden[i] == Catch::Approx(kEsimFinal[i]).margin(1e-12));
  REQUIRE(enc.claim_token_encodings.size() == kEsimClaimTokens.size());
  for (std::size_t i = 0; i < kEsimClaimTokens.size(); ++i)
    CHECK(enc.claim_token_encodings[i] == Catch::Approx(kEsimClaimTokens[i]).margin(1e-12));
}

TEST_CASE("dropout only applies when a generator is given", "[esim][encode]") {
  ParamSet params(9);
  EsimParams esim = EsimParams::create(params, "esim", {4, 2, false, 0.5});
  Rng rng(9);
  Tensor a = random_tensor(rng, {2, 4}), b = random_tensor(rng, {3, 4});
  Graph g;
  auto plain = encode_pair(g, params, esim, g.input("a", a), g.input("b", b));
  Rng drop(1);
  auto dropped = encode_pair(g, params, esim, g.input("a2", a), g.input("b2", b), &drop);
  CHECK_FALSE(plain.final_hidden.value() == dropped.final_hidden.value());
  CHECK(encode_pair(a, b, params, esim).final_hidden == plain.final_hidden.value());
}

}  // namespace
}  // namespace factpipe::esim
