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

#include "sat/aug_choice.hpp"

#include <random>

#include "sat/error.hpp"

namespace sat {

namespace {

Tensor uniform_tensor(Shape shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kInitRange, kInitRange);
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.data()) v = u(rng);
  return t;
}

std::vector<double> to_vector(Var v) {
  auto s = v.value();
  return {s.begin(), s.end()};
}

}  // namespace

std::string to_string(CriterionKind kind) {
  return kind == CriterionKind::kClassifier ? "classifier" : "scorer";
}

CriterionKind parse_criterion(const std::string& name) {
  if (name == "classifier") return CriterionKind::kClassifier;
  if (name == "scorer") return CriterionKind::kScorer;
  throw ConfigError("unknown criterion '" + name + "' (expected classifier|scorer)");
}

std::string to_string(ClassifierSimilarity s) {
  return s == ClassifierSimilarity::kDistributional ? "distributional" : "label";
}

ClassifierSimilarity parse_classifier_similarity(const std::string& name) {
  if (name == "distributional") return ClassifierSimilarity::kDistributional;
  if (name == "label") return ClassifierSimilarity::kLabelConditional;
  throw ConfigError("unknown classifier similarity '" + name +
                    "' (expected distributional|label)");
}

StrengthRanking rank_descending(double i1, double i2) {
  StrengthRanking r;
  r.score1 = i1;
  r.score2 = i2;
  if (i2 > i1) {
    r.weak_index = 2;
    r.strong_index = 1;
  }
  return r;
}

// --- ChoiceNetwork ------------------------------------------------------------------

ChoiceNetwork::ChoiceNetwork(std::size_t vocab_size, const ChoiceConfig& config,
                             std::uint64_t seed)
    : config_(config) {
  if (config.kind == CriterionKind::kScorer) {
    if (!(config.temperature > 0.0)) throw ConfigError("temperature must be positive");
    if (config.d_proj == 0) throw ConfigError("d_proj must be positive");
  }
  std::mt19937_64 rng(seed);
  encoder_ = Encoder(vocab_size, config.dims, rng, "choice.");
  const std::size_t h = config.dims.d_hid;
  pair_weight_ = Parameter("choice.pair.weight", uniform_tensor({1, 3 * h}, rng));
  pair_bias_ = Parameter("choice.pair.bias", Tensor::zeros({1}));
  proj_weight_ = Parameter("choice.proj.weight", uniform_tensor({config.d_proj, h}, rng));
  proj_bias_ = Parameter("choice.proj.bias", Tensor::zeros({config.d_proj}));
}

std::vector<Parameter*> ChoiceNetwork::parameters() {
  auto p = encoder_.parameters();
  if (config_.kind == CriterionKind::kClassifier) {
    p.push_back(&pair_weight_);
    p.push_back(&pair_bias_);
  } else {
    p.push_back(&proj_weight_);
    p.push_back(&proj_bias_);
  }
  return p;
}

std::vector<const Parameter*> ChoiceNetwork::parameters() const {
  auto p = encoder_.parameters();
  if (config_.kind == CriterionKind::kClassifier) {
    p.push_back(&pair_weight_);
    p.push_back(&pair_bias_);
  } else {
    p.push_back(&proj_weight_);
    p.push_back(&proj_bias_);
  }
  return p;
}

template <class Self>
Var ChoiceNetwork::head_impl(Self& self, Graph& g, const Example& original,
                             const Example& view1, const Example& view2) {
  Var ex = self.encoder_.encode(g, original.tokens);
  Var w = g.param(self.pair_weight_);
  Var b = g.param(self.pair_bias_);
  std::vector<Var> logits;
  for (const Example* view : {&view1, &view2}) {
    Var ev = self.encoder_.encode(g, view->tokens);
    Var diff = sub(ex, ev);
    std::vector<Var> parts{ev, mul(ex, ev), mul(diff, diff)};
    logits.push_back(affine(concat(parts), w, b));
  }
  return softmax(concat(logits));
}

Var ChoiceNetwork::head_distribution(Graph& g, const Example& original, const Example& view1,
                                     const Example& view2) {
  return head_impl(*this, g, original, view1, view2);
}

ProbabilityVector ChoiceNetwork::head_distribution(const Example& original,
                                                   const Example& view1,
                                                   const Example& view2) const {
  Graph g(false);
  return ProbabilityVector(to_vector(head_impl(*this, g, original, view1, view2)));
}

Var ChoiceNetwork::project(Graph& g, std::span<const int> tokens) {
  Var h = encoder_.encode(g, tokens);
  return affine(h, g.param(proj_weight_), g.param(proj_bias_));
}

// --- criteria -----------------------------------------------------------------------

double criterion_score(CriterionKind kind, const Example& original, const Example& augmented,
                       std::size_t label, const MainNetwork& main, const ChoiceNetwork& choice) {
  if (label >= main.classes()) {
    throw DataError("label " + std::to_string(label) + " out of range");
  }
  if (kind == CriterionKind::kScorer) {
    return cosine_similarity(choice.encoder().encode(original.tokens),
                             choice.encoder().encode(augmented.tokens));
  }
  const ProbabilityVector p_aug = main.predict_proba(augmented.tokens);
  if (choice.config().similarity == ClassifierSimilarity::kLabelConditional) {
    return -cross_entropy(label, p_aug);
  }
  const ProbabilityVector p_orig = main.predict_proba(original.tokens);
  return -cross_entropy(p_orig.probs(), p_aug);
}

Var choice_loss(Graph& g, ChoiceNetwork& choice, std::span<const ChoiceItem> items) {
  if (items.empty()) throw UsageError("choice loss of an empty batch");
  for (const auto& it : items) {
    if (it.weak_index != 1 && it.weak_index != 2) {
      throw UsageError("weak_index must be 1 or 2");
    }
  }
  std::vector<Var> losses;
  losses.reserve(items.size());
  if (choice.kind() == CriterionKind::kClassifier) {
    for (const auto& it : items) {
      Var q = choice.head_distribution(g, *it.original, *it.view1, *it.view2);
      losses.push_back(cross_entropy(static_cast<std::size_t>(it.weak_index - 1), q));
    }
  } else {
    std::vector<Var> anchors, z1, z2;
    for (const auto& it : items) {
      anchors.push_back(choice.project(g, it.original->tokens));
      z1.push_back(choice.project(g, it.view1->tokens));
      z2.push_back(choice.project(g, it.view2->tokens));
    }
    const double t = choice.config().temperature;
    for (std::size_t b = 0; b < items.size(); ++b) {
      const bool first_weak = items[b].weak_index == 1;
      Var positive = first_weak ? z1[b] : z2[b];
      std::vector<Var> negatives{first_weak ? z2[b] : z1[b]};
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (j == b) continue;
        negatives.push_back(z1[j]);
        negatives.push_back(z2[j]);
      }
      losses.push_back(contrastive_loss(anchors[b], positive, negatives, t));
    }
  }
  return scale(sum(losses), 1.0 / static_cast<double>(items.size()));
}

double choice_loss(ChoiceNetwork& choice, const ChoiceItem& item) {
  Graph g(false);
  return choice_loss(g, choice, std::span<const ChoiceItem>(&item, 1)).item();
}

double update_choice_network(ChoiceNetwork& choice, std::span<const ChoiceItem> items,
                             Optimizer& optimizer) {
  if (choice.kind() == CriterionKind::kScorer && items.size() < 2) {
    throw ConfigError("the scorer-based choice network needs at least two items per batch");
  }
  auto params = choice.parameters();
  zero_grad(params);
  Graph g;
  Var loss = choice_loss(g, choice, items);
  g.backward(loss);
  optimizer.step(params);
  return loss.item();
}

double update_choice_network(ChoiceNetwork& choice, std::span<const ChoiceItem> items,
                             double beta) {
  Sgd sgd(beta);
  return update_choice_network(choice, items, sgd);
}

StrengthRanking infer_choice(const Example& unlabeled, const Example& view1,
                             const Example& view2, const ChoiceNetwork& choice) {
  if (choice.kind() == CriterionKind::kClassifier) {
    const ProbabilityVector q = choice.head_distribution(unlabeled, view1, view2);
    return rank_descending(q[0], q[1]);
  }
  const auto e = choice.encoder().encode(unlabeled.tokens);
  return rank_descending(cosine_similarity(e, choice.encoder().encode(view1.tokens)),
                         cosine_similarity(e, choice.encoder().encode(view2.tokens)));
}

}  // namespace sat
