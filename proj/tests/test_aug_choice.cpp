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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sat/aug_choice.hpp"
#include "sat/error.hpp"
#include "sat/gradcheck.hpp"
#include "sat/model.hpp"
#include "sat/optim.hpp"
#include "test_util.hpp"

using namespace sat;
using sat::testing::make_example;

namespace {

const Tensor kIdentity4({4, 4}, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});

// Encoder with identity weight and zero bias: hidden = tanh(mean embedding).
void make_transparent(Encoder& enc) {
  enc.weight.value = kIdentity4;
  enc.bias.value.fill(0.0);
  enc.embedding.value.fill(0.0);
}

ChoiceNetwork make_choice(CriterionKind kind, std::uint64_t seed = 1,
                          ClassifierSimilarity sim = ClassifierSimilarity::kDistributional) {
  ChoiceConfig cfg;
  cfg.kind = kind;
  cfg.similarity = sim;
  cfg.dims = {6, 5};
  cfg.d_proj = 4;
  return ChoiceNetwork(30, cfg, seed);
}

struct Triple {
  Example original, view1, view2;
};

std::vector<Triple> random_triples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> tok(2, 29);
  std::vector<Triple> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> base(6);
    for (auto& t : base) t = tok(rng);
    std::vector<int> drop(base.begin(), base.begin() + 3);
    std::vector<int> noisy = base;
    noisy[0] = tok(rng);
    out.push_back({make_example(base), make_example(noisy), make_example(drop)});
  }
  return out;
}

std::vector<ChoiceItem> items_of(const std::vector<Triple>& ts) {
  std::vector<ChoiceItem> items;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    items.push_back({&ts[i].original, &ts[i].view1, &ts[i].view2, i % 3 == 0 ? 2 : 1});
  }
  return items;
}

}  // namespace

TEST_CASE("parse names") {
  CHECK(parse_criterion("classifier") == CriterionKind::kClassifier);
  CHECK(parse_criterion("scorer") == CriterionKind::kScorer);
  CHECK_THROWS_AS(parse_criterion("oracle"), ConfigError);
  CHECK(parse_classifier_similarity("label") == ClassifierSimilarity::kLabelConditional);
  CHECK(to_string(ClassifierSimilarity::kDistributional) == "distributional");
}

TEST_CASE("rank_descending examples") {
  CHECK(rank_descending(0.9, 0.3).weak_index == 1);
  CHECK(rank_descending(0.9, 0.3).strong_index == 2);
  CHECK(rank_descending(0.3, 0.9).weak_index == 2);
  CHECK(rank_descending(0.3, 0.9).strong_index == 1);
  CHECK(rank_descending(0.5, 0.5).weak_index == 1);
}

TEST_CASE("rank_descending always puts the higher score on the weak side") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coarse(-3, 3);  // frequent ties
  std::uniform_real_distribution<double> fine(-1, 1);
  for (int trial = 0; trial < 5000; ++trial) {
    const double a = trial % 2 ? coarse(rng) : fine(rng);
    const double b = trial % 2 ? coarse(rng) : fine(rng);
    auto r = rank_descending(a, b);
    CHECK(r.weak_index + r.strong_index == 3);
    CHECK(r.score(r.weak_index) >= r.score(r.strong_index));
    if (a == b) CHECK(r.weak_index == 1);
  }
}

TEST_CASE("classifier criterion on hand-built distributions") {
  // Token 2 gives zero hidden features, so p(y|x) = softmax(bias) = [0.9, 0.1].
  // Token 3 gives hidden[0] = 0.5, shifting the first logit by ln(1/6), so
  // p(y|view) = [0.6, 0.4].
  MainNetwork main(10, 2, {4, 4}, 0);
  make_transparent(main.encoder());
  main.encoder().embedding.value.at(3, 0) = std::atanh(0.5);
  main.output_bias().value = Tensor::vector({std::log(0.9), std::log(0.1)});
  main.output_weight().value = Tensor({2, 4}, {2 * std::log(1.0 / 6), 0, 0, 0, 0, 0, 0, 0});
  Example x = make_example({2}, 0);
  Example view = make_example({3}, 0);
  auto px = main.predict_proba(x.tokens);
  auto pv = main.predict_proba(view.tokens);
  CHECK(std::abs(px[0] - 0.9) <= 1e-12);
  CHECK(std::abs(pv[0] - 0.6) <= 1e-12);

  auto choice = make_choice(CriterionKind::kClassifier);
  const double expected = -(0.9 * -std::log(0.6) + 0.1 * -std::log(0.4));
  const double score = criterion_score(CriterionKind::kClassifier, x, view, 0, main, choice);
  CHECK(std::abs(score - expected) <= 1e-9);
  CHECK(std::abs(expected - -0.551372) <= 1e-6);

  // Identical view: -entropy(p(y|x)), the best any view with that
  // prediction can get.
  const double self = criterion_score(CriterionKind::kClassifier, x, x, 0, main, choice);
  CHECK(std::abs(self - (0.9 * std::log(0.9) + 0.1 * std::log(0.1))) <= 1e-12);
  CHECK(self > score);

  auto label_choice =
      make_choice(CriterionKind::kClassifier, 1, ClassifierSimilarity::kLabelConditional);
  CHECK(std::abs(criterion_score(CriterionKind::kClassifier, x, view, 1, main, label_choice) -
                 std::log(0.4)) <= 1e-12);
  CHECK_THROWS_AS(criterion_score(CriterionKind::kClassifier, x, view, 2, main, choice),
                  DataError);
}

TEST_CASE("scorer criterion") {
  MainNetwork main(30, 2, {}, 0);
  ChoiceConfig cfg;
  cfg.dims = {4, 4};
  ChoiceNetwork choice(30, cfg, 2);
  Example x = make_example({4, 9, 11}, 0);
  CHECK(criterion_score(CriterionKind::kScorer, x, x, 0, main, choice) == 1.0);

  make_transparent(choice.encoder());
  choice.encoder().embedding.value.at(5, 0) = 1.0;
  choice.encoder().embedding.value.at(6, 1) = 1.0;
  CHECK(criterion_score(CriterionKind::kScorer, make_example({5}), make_example({6}), 0, main,
                        choice) == 0.0);

  ChoiceNetwork random(30, cfg, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> k(0.1, 50);
  for (int trial = 0; trial < 50; ++trial) {
    Example a = make_example({2 + trial % 20, 7, 20});
    Example b = make_example({3, 2 + trial % 25});
    const double s = criterion_score(CriterionKind::kScorer, a, b, 1, main, random);
    auto ea = random.encoder().encode(a.tokens);
    const double scale = k(rng);
    for (auto& v : ea) v *= scale;
    CHECK(std::abs(s - cosine_similarity(ea, random.encoder().encode(b.tokens))) <= 1e-9);
  }
}

TEST_CASE("choice loss anchors") {
  Example x = make_example({4, 5, 6});
  Example v = make_example({4, 5});
  SUBCASE("uniform classifier head gives ln 2") {
    auto choice = make_choice(CriterionKind::kClassifier);
    choice.pair_weight().value.fill(0.0);
    Example w = make_example({9});
    CHECK(std::abs(choice_loss(choice, {&x, &v, &w, 1}) - std::log(2.0)) <= 1e-12);
    CHECK(std::abs(choice_loss(choice, {&x, &v, &w, 2}) - std::log(2.0)) <= 1e-12);
  }
  SUBCASE("equal similarities give ln(1 + |negatives|)") {
    auto choice = make_choice(CriterionKind::kScorer);
    CHECK(std::abs(choice_loss(choice, {&x, &v, &v, 1}) - std::log(2.0)) <= 1e-12);
    std::vector<ChoiceItem> three(3, ChoiceItem{&x, &v, &v, 1});
    Graph g(false);
    CHECK(std::abs(choice_loss(g, choice, three).item() - std::log(6.0)) <= 1e-12);
  }
  SUBCASE("scorer loss is non-negative") {
    auto choice = make_choice(CriterionKind::kScorer, 5);
    auto ts = random_triples(6, 2);
    auto items = items_of(ts);
    Graph g(false);
    CHECK(choice_loss(g, choice, items).item() >= 0.0);
  }
  SUBCASE("bad weak index") {
    auto choice = make_choice(CriterionKind::kClassifier);
    CHECK_THROWS_AS(choice_loss(choice, {&x, &v, &v, 3}), UsageError);
  }
}

TEST_CASE("zero rate leaves the choice network unchanged") {
  for (auto kind : {CriterionKind::kClassifier, CriterionKind::kScorer}) {
    auto choice = make_choice(kind);
    auto ts = random_triples(4, 3);
    auto items = items_of(ts);
    std::vector<Tensor> before;
    for (auto* p : choice.parameters()) before.push_back(p->value);
    update_choice_network(choice, items, 0.0);
    auto params = choice.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) CHECK(params[i]->value == before[i]);
  }
}

TEST_CASE("choice updates never touch the main network") {
  MainNetwork main(30, 3, {6, 5}, 9);
  const auto before = main.snapshot();
  for (auto kind : {CriterionKind::kClassifier, CriterionKind::kScorer}) {
    auto choice = make_choice(kind);
    auto ts = random_triples(4, 4);
    auto items = items_of(ts);
    const double loss0 = [&] {
      Graph g(false);
      return choice_loss(g, choice, items).item();
    }();
    // Probe: perturbing main parameters leaves the choice objective unchanged.
    for (auto* p : main.parameters()) {
      p->value[0] += 1e-3;
      Graph g(false);
      CHECK(std::abs(choice_loss(g, choice, items).item() - loss0) <= 1e-8);
      p->value[0] -= 1e-3;
    }
    for (int s = 0; s < 5; ++s) update_choice_network(choice, items, 0.1);
    for (auto* p : main.parameters()) {
      for (double gv : p->grad.values()) CHECK(gv == 0.0);
    }
  }
  CHECK(main.snapshot() == before);
}

TEST_CASE("scorer update needs in-batch negatives") {
  auto choice = make_choice(CriterionKind::kScorer);
  auto ts = random_triples(1, 5);
  auto items = items_of(ts);
  CHECK_THROWS_AS(update_choice_network(choice, items, 0.1), ConfigError);
}

TEST_CASE("fixed batch descent at the default rate") {
  // Default dimensions; view "weak" swaps one token, view "strong" keeps and
  // shuffles half. Positions alternate so the label is not constant.
  for (auto kind : {CriterionKind::kClassifier, CriterionKind::kScorer}) {
    for (std::uint64_t seed : {1, 2}) {
      CAPTURE(to_string(kind));
      CAPTURE(seed);
      ChoiceConfig cfg;
      cfg.kind = kind;
      ChoiceNetwork choice(100, cfg, seed);
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> tok(2, 99);
      std::vector<Example> ex;
      for (int i = 0; i < 16; ++i) {
        std::vector<int> base(10);
        for (auto& t : base) t = tok(rng);
        std::vector<int> weak = base;
        weak[0] = tok(rng);
        std::vector<int> strong(base.begin(), base.begin() + 5);
        std::shuffle(strong.begin(), strong.end(), rng);
        ex.push_back(make_example(base));
        ex.push_back(make_example(weak));
        ex.push_back(make_example(strong));
      }
      std::vector<ChoiceItem> items;
      for (std::size_t i = 0; i < 16; ++i) {
        const bool swap = i % 2 == 1;
        items.push_back({&ex[3 * i], &ex[3 * i + (swap ? 2 : 1)], &ex[3 * i + (swap ? 1 : 2)],
                         swap ? 2 : 1});
      }
      std::vector<double> losses;
      for (int s = 0; s < 300; ++s) losses.push_back(update_choice_network(choice, items, 1e-4));
      double prev = INFINITY;
      for (int w = 0; w < 300; w += 50) {
        double m = 0;
        for (int i = w; i < w + 50; ++i) m += losses[i] / 50;
        CHECK(m < prev);
        prev = m;
      }
    }
  }
}

TEST_CASE("infer_choice") {
  MainNetwork main(30, 2, {}, 0);
  auto scorer = make_choice(CriterionKind::kScorer, 8);
  Example x = make_example({3, 8, 12, 20});
  Example other = make_example({5, 6});
  CHECK(infer_choice(x, x, other, scorer).weak_index == 1);
  CHECK(infer_choice(x, other, x, scorer).weak_index == 2);

  for (auto kind : {CriterionKind::kClassifier, CriterionKind::kScorer}) {
    auto choice = make_choice(kind, 9);
    for (const auto& t : random_triples(100, 7)) {
      auto a = infer_choice(t.original, t.view1, t.view2, choice);
      auto b = infer_choice(t.original, t.view2, t.view1, choice);
      CHECK(a.score1 == b.score2);
      CHECK(a.score2 == b.score1);
      if (a.score1 != a.score2) CHECK(a.weak_index == b.strong_index);
    }
  }
}

TEST_CASE("parameters exposes only the active head") {
  auto c = make_choice(CriterionKind::kClassifier);
  auto s = make_choice(CriterionKind::kScorer);
  auto has = [](ChoiceNetwork& n, const std::string& name) {
    for (auto* p : n.parameters()) {
      if (p->name == name) return true;
    }
    return false;
  };
  CHECK(has(c, "choice.pair.weight"));
  CHECK(!has(c, "choice.proj.weight"));
  CHECK(has(s, "choice.proj.weight"));
  CHECK(!has(s, "choice.pair.weight"));
}

TEST_CASE("choice loss gradients pass finite differences") {
  for (auto kind : {CriterionKind::kClassifier, CriterionKind::kScorer}) {
    CAPTURE(to_string(kind));
    auto choice = make_choice(kind, 12);
    // Evaluate away from the small-norm initialization, where cosine
    // curvature makes central differences inaccurate at eps = 1e-4.
    std::mt19937_64 rng(13);
    for (auto* p : choice.parameters()) {
      for (auto& v : p->value.values()) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    }
    auto ts = random_triples(4, 14);
    auto items = items_of(ts);
    auto params = choice.parameters();
    const double err = finite_diff_check(
        [&](Graph& g) { return choice_loss(g, choice, items); }, params, {.samples = 100});
    CHECK(err <= 1e-4);
  }
}
