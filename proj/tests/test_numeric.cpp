// Copyright 2026 The SAT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "sat/error.hpp"
#include "sat/gradcheck.hpp"
#include "sat/graph.hpp"
#include "sat/optim.hpp"
#include "sat/tensor.hpp"
#include "test_util.hpp"

using namespace sat;
using sat::testing::oracle_cross_entropy;
using sat::testing::oracle_softmax;
using sat::testing::random_vector;

namespace {

std::vector<double> vals(Var v) { return {v.value().begin(), v.value().end()}; }

Parameter param(const char* name, Shape shape, std::vector<double> values) {
  return Parameter(name, Tensor(std::move(shape), std::move(values)));
}

}  // namespace

TEST_CASE("tensor rejects inconsistent shapes") {
  CHECK_NOTHROW(Tensor({2, 3}, std::vector<double>(6)));
  CHECK_THROWS_AS(Tensor({2, 3}, std::vector<double>(5)), ConfigError);
  CHECK_THROWS_AS(Tensor({0}, {}), ConfigError);
  Parameter p = param("p", {2, 2}, {1, 2, 3, 4});
  CHECK(p.grad.shape() == p.value.shape());
  CHECK(p.grad.values()[3] == 0.0);
}

TEST_CASE("probability vector validation and argmax ties") {
  CHECK_THROWS_AS(ProbabilityVector({0.5, 0.6}), NumericError);
  CHECK_THROWS_AS(ProbabilityVector({1.2, -0.2}), NumericError);
  ProbabilityVector p({0.4, 0.4, 0.2});
  CHECK(p.argmax() == 0);
  CHECK(p.max() == doctest::Approx(0.4));
}

TEST_CASE("affine examples") {
  Graph g;
  Var w = g.constant(Tensor({2, 2}, {1, 0, 0, 1}));
  Var b = g.constant(Tensor::vector({0, 0}));
  CHECK(vals(affine(g.constant(Tensor::vector({1, 2})), w, b)) == std::vector<double>{1, 2});
  Var w2 = g.constant(Tensor({2, 2}, {7, -3, 0.5, 9}));
  Var b2 = g.constant(Tensor::vector({3, -1}));
  CHECK(vals(affine(g.constant(Tensor::vector({0, 0})), w2, b2)) == std::vector<double>{3, -1});
  CHECK_THROWS_AS(affine(g.constant(Tensor::vector({1, 2, 3})), w, b), ConfigError);
}

TEST_CASE("softmax examples") {
  auto p = softmax(std::vector<double>{0, 0});
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  auto big = softmax(std::vector<double>{1000, 1000, 1000});
  for (double v : big.probs()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
  auto q = softmax(std::vector<double>{std::log(1.0), std::log(3.0)});
  CHECK(std::abs(q[0] - 0.25) <= 1e-12);
  CHECK(std::abs(q[1] - 0.75) <= 1e-12);
  CHECK_THROWS_AS(softmax(std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("softmax sums to one and is shift invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> shift(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t c = 2 + trial % 7;
    auto z = random_vector(rng, c, -20, 20);
    auto p = softmax(z);
    double s = std::accumulate(p.probs().begin(), p.probs().end(), 0.0);
    CHECK(std::abs(s - 1.0) <= 1e-6);
    const double k = shift(rng);
    std::vector<double> z2 = z;
    for (auto& v : z2) v += k;
    auto p2 = softmax(z2);
    auto oracle = oracle_softmax(z);
    for (std::size_t i = 0; i < c; ++i) {
      CHECK(std::abs(p[i] - p2[i]) <= 1e-6);
      CHECK(std::abs(p[i] - oracle[i]) <= 1e-12);
    }
  }
}

TEST_CASE("cross entropy examples") {
  CHECK(cross_entropy(0, ProbabilityVector({1.0, 0.0})) == 0.0);
  CHECK(cross_entropy(1, ProbabilityVector({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const std::vector<double> q{0.3, 0.7};
  const double entropy = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
  CHECK(std::abs(cross_entropy(q, ProbabilityVector(q)) - entropy) <= 1e-12);
  CHECK(std::abs(entropy - 0.610864) <= 1e-6);
  // Clamping keeps a zero target probability finite.
  CHECK(cross_entropy(1, ProbabilityVector({1.0, 0.0})) ==
        doctest::Approx(-std::log(kProbFloor)));
  CHECK_THROWS_AS(cross_entropy(2, ProbabilityVector({0.5, 0.5})), DataError);
}

TEST_CASE("cross entropy is non-negative and zero only at a point mass") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = softmax(random_vector(rng, 4, -5, 5));
    for (std::size_t t = 0; t < 4; ++t) CHECK(cross_entropy(t, p) > 0.0);
  }
  CHECK(cross_entropy(2, ProbabilityVector({0, 0, 1})) == 0.0);
}

TEST_CASE("cosine examples and properties") {
  std::vector<double> a{1, 2, 3};
  CHECK(cosine_similarity(a, a) == 1.0);
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(std::abs(cosine_similarity(std::vector<double>{1, 1}, std::vector<double>{1, 0}) -
                 std::sqrt(2.0) / 2) <= 1e-12);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}),
                  DegenerateInputError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> k(0.01, 100);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_vector(rng, 6);
    auto y = random_vector(rng, 6);
    const double c = cosine_similarity(x, y);
    CHECK(std::abs(c - cosine_similarity(y, x)) <= 1e-9);
    const double s = k(rng);
    std::vector<double> xs = x;
    for (auto& v : xs) v *= s;
    CHECK(std::abs(c - cosine_similarity(xs, y)) <= 1e-9);
  }
}

TEST_CASE("graph ops match plain-value counterparts") {
  std::mt19937_64 rng(9);
  auto z = random_vector(rng, 5, -3, 3);
  auto a = random_vector(rng, 5);
  auto b = random_vector(rng, 5);
  Graph g(false);
  Var p = softmax(g.constant(Tensor::vector(z)));
  auto plain = softmax(z);
  for (std::size_t i = 0; i < 5; ++i) CHECK(p.value()[i] == plain[i]);
  CHECK(cross_entropy(3, p).item() == cross_entropy(3, plain));
  CHECK(cosine_similarity(g.constant(Tensor::vector(a)), g.constant(Tensor::vector(b))).item() ==
        doctest::Approx(cosine_similarity(a, b)).epsilon(1e-14));
}

TEST_CASE("backward examples") {
  SUBCASE("quadratic") {
    Parameter p = param("p", {1}, {3.0});
    Graph g;
    Var loss = square(g.param(p));
    g.backward(loss);
    CHECK(p.grad[0] == 6.0);
  }
  SUBCASE("softmax cross entropy gradient is probs minus one-hot") {
    std::mt19937_64 rng(2);
    auto z = random_vector(rng, 4, -2, 2);
    Parameter logits = param("z", {4}, z);
    Graph g;
    g.backward(cross_entropy(0, softmax(g.param(logits))));
    auto probs = oracle_softmax(z);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(logits.grad[i] - (probs[i] - (i == 0 ? 1.0 : 0.0))) <= 1e-12);
    }
  }
  SUBCASE("two backward calls double the gradient") {
    Parameter w = param("w", {3}, {0.5, -1.0, 2.0});
    Graph g;
    Var loss = sum(square(g.param(w)));
    g.backward(loss);
    const Tensor once = w.grad;
    g.backward(loss);
    for (std::size_t i = 0; i < 3; ++i) CHECK(w.grad[i] == 2 * once[i]);
  }
  SUBCASE("misuse") {
    Parameter w = param("w", {2}, {1, 2});
    Graph g;
    CHECK_THROWS_AS(g.backward(g.param(w)), UsageError);
    Graph inference(false);
    CHECK_THROWS_AS(inference.backward(sum(inference.param(w))), UsageError);
  }
  SUBCASE("const binding receives no gradient") {
    Parameter w = param("w", {2}, {1, 2});
    Parameter v = param("v", {2}, {3, 4});
    Graph g;
    const Parameter& frozen = v;
    g.backward(dot(g.param(w), g.param(frozen)));
    CHECK(w.grad[0] == 3.0);
    CHECK(v.grad[0] == 0.0);
  }
}

TEST_CASE("embedding mean skips padding and rejects bad ids") {
  Parameter table = param("E", {3, 2}, {9, 9, 1, 2, 3, 6});
  Graph g(false);
  const std::vector<int> ids{1, 0, 2, 0};
  CHECK(vals(embedding_mean(g.param(std::as_const(table)), ids)) == std::vector<double>{2, 4});
  const std::vector<int> pads{0, 0};
  CHECK_THROWS_AS(embedding_mean(g.param(std::as_const(table)), pads), DegenerateInputError);
  const std::vector<int> bad{5};
  CHECK_THROWS_AS(embedding_mean(g.param(std::as_const(table)), bad), DataError);
}

TEST_CASE("sgd examples") {
  Parameter p = param("p", {1}, {1.0});
  p.grad[0] = 2.0;
  std::vector<Parameter*> ps{&p};
  sgd_step(ps, 0.1);
  CHECK(p.value[0] == doctest::Approx(0.8).epsilon(1e-15));

  SUBCASE("descent on w^2") {
    Parameter w = param("w", {1}, {1.0});
    std::vector<Parameter*> ws{&w};
    auto loss_at = [&] {
      Graph g(false);
      return square(g.param(std::as_const(w))).item();
    };
    const double before = loss_at();
    Graph g;
    g.backward(square(g.param(w)));
    Sgd opt(0.1);
    opt.step(ws);
    CHECK(w.value[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(loss_at() < before);
  }
}

TEST_CASE("zero rate is a bitwise no-op") {
  std::mt19937_64 rng(4);
  Parameter w("w", Tensor({3, 3}, random_vector(rng, 9)));
  w.grad = Tensor({3, 3}, random_vector(rng, 9));
  const Tensor before = w.value;
  std::vector<Parameter*> ws{&w};
  sgd_step(ws, 0.0);
  CHECK(w.value == before);
  Sgd(0.0).step(ws);
  CHECK(w.value == before);
}

TEST_CASE("adam moves against the gradient") {
  Parameter w = param("w", {2}, {1.0, -1.0});
  std::vector<Parameter*> ws{&w};
  Adam opt(0.1);
  for (int i = 0; i < 3; ++i) {
    zero_grad(ws);
    Graph g;
    g.backward(sum(square(g.param(w))));
    opt.step(ws);
  }
  CHECK(std::abs(w.value[0]) < 1.0);
  CHECK(std::abs(w.value[1]) < 1.0);
  CHECK_THROWS_AS(make_optimizer("rmsprop", 0.1), ConfigError);
}

TEST_CASE("finite differences: linear loss is exact") {
  std::mt19937_64 rng(1);
  Parameter w("w", Tensor({10}, random_vector(rng, 10)));
  const Tensor c = Tensor::vector(random_vector(rng, 10));
  std::vector<Parameter*> ps{&w};
  const double err = finite_diff_check([&](Graph& g) { return dot(g.param(w), g.constant(c)); },
                                       ps);
  CHECK(err <= 1e-7);
  for (double v : w.grad.values()) CHECK(v == 0.0);
}

TEST_CASE("finite differences: embedding, MLP and softmax cross entropy") {
  std::mt19937_64 rng(8);
  Parameter table("E", Tensor({12, 5}, random_vector(rng, 60)));
  Parameter w1("W1", Tensor({6, 5}, random_vector(rng, 30)));
  Parameter b1("b1", Tensor::vector(random_vector(rng, 6)));
  Parameter w2("W2", Tensor({4, 6}, random_vector(rng, 24)));
  Parameter b2("b2", Tensor::vector(random_vector(rng, 4)));
  std::vector<Parameter*> ps{&table, &w1, &b1, &w2, &b2};
  const std::vector<std::vector<int>> docs{{2, 3, 3, 7}, {5, 11, 1}, {4, 9, 10, 2, 6}};
  const std::vector<std::size_t> labels{0, 3, 1};
  auto loss = [&](Graph& g) {
    std::vector<Var> terms;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      Var h = tanh(affine(embedding_mean(g.param(table), docs[i]), g.param(w1), g.param(b1)));
      terms.push_back(cross_entropy(labels[i], softmax(affine(h, g.param(w2), g.param(b2)))));
    }
    return scale(sum(terms), 1.0 / terms.size());
  };
  CHECK(finite_diff_check(loss, ps, {.samples = 100, .seed = 3}) <= 1e-4);
}

TEST_CASE("finite differences: contrastive loss on four items") {
  std::mt19937_64 rng(21);
  Parameter z("z", Tensor({8, 5}, random_vector(rng, 40)));
  std::vector<Parameter*> ps{&z};
  auto row = [&](Graph& g, Var all, std::size_t r) {
    // A 0/1 selection matrix keeps the gradient flowing through z.
    Var sel = g.constant(Tensor({5, 40}, [&] {
      std::vector<double> m(5 * 40, 0.0);
      for (std::size_t c = 0; c < 5; ++c) m[c * 40 + r * 5 + c] = 1.0;
      return m;
    }()));
    return affine(all, sel, g.constant(Tensor::zeros({5})));
  };
  auto loss = [&](Graph& g) {
    Var all = g.param(z);
    std::vector<Var> terms;
    for (std::size_t i = 0; i < 4; ++i) {
      Var anchor = row(g, all, 2 * i);
      Var positive = row(g, all, 2 * i + 1);
      std::vector<Var> negatives;
      for (std::size_t j = 0; j < 8; ++j) {
        if (j != 2 * i && j != 2 * i + 1) negatives.push_back(row(g, all, j));
      }
      terms.push_back(contrastive_loss(anchor, positive, negatives, 0.5));
    }
    return scale(sum(terms), 0.25);
  };
  CHECK(finite_diff_check(loss, ps) <= 1e-4);
}

TEST_CASE("contrastive loss closed forms") {
  Graph g(false);
  Var a = g.constant(Tensor::vector({1, 0}));
  Var pos = g.constant(Tensor::vector({2, 0}));
  std::vector<Var> neg{g.constant(Tensor::vector({0, 3}))};
  const double expected = -std::log(std::exp(2.0) / (std::exp(2.0) + 1.0));
  CHECK(std::abs(contrastive_loss(a, pos, neg, 0.5).item() - expected) <= 1e-12);
  CHECK(std::abs(expected - 0.126928) <= 1e-6);
  std::vector<Var> same{g.constant(Tensor::vector({5, 0})), g.constant(Tensor::vector({1, 0}))};
  CHECK(std::abs(contrastive_loss(a, pos, same, 0.5).item() - std::log(3.0)) <= 1e-12);
  CHECK_THROWS_AS(contrastive_loss(a, pos, neg, 0.0), ConfigError);
}

TEST_CASE("non-finite forward values are reported") {
  Graph g;
  Var x = g.constant(Tensor::vector({1e300, 1e300}));
  CHECK_THROWS_AS(mul(x, x), NumericError);
}
