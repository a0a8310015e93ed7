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

#ifndef SAT_AUG_CHOICE_HPP
#define SAT_AUG_CHOICE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sat/corpus.hpp"
#include "sat/graph.hpp"
#include "sat/model.hpp"
#include "sat/optim.hpp"

namespace sat {

enum class CriterionKind { kClassifier, kScorer };

std::string to_string(CriterionKind kind);
// "classifier" or "scorer".
CriterionKind parse_criterion(const std::string& name);

// How the classifier-based criterion measures similarity of an augmented
// view to its original.
enum class ClassifierSimilarity {
  kDistributional,    // -H(p(y|x), p(y|view))
  kLabelConditional,  // -H(y, p(y|view))
};

std::string to_string(ClassifierSimilarity s);
// "distributional" or "label".
ClassifierSimilarity parse_classifier_similarity(const std::string& name);

// Which of two views (1 or 2) is the weak, i.e. more similar, augmentation.
struct StrengthRanking {
  int weak_index = 1;
  int strong_index = 2;
  double score1 = 0.0;
  double score2 = 0.0;

  double score(int index) const { return index == 1 ? score1 : score2; }
  friend bool operator==(const StrengthRanking&, const StrengthRanking&) = default;
};

// Higher score = weak. Ties go to view 1.
StrengthRanking rank_descending(double i1, double i2);

struct ChoiceConfig {
  CriterionKind kind = CriterionKind::kScorer;
  ClassifierSimilarity similarity = ClassifierSimilarity::kDistributional;
  ModelDims dims;
  std::size_t d_proj = 32;
  double temperature = 0.5;
};

// The augmentation choice network G. It owns an encoder of the same shape as
// the main network's but with separate parameters, plus one head:
//
//  - classifier: a shared affine scorer over per-view pair features
//      phi_k = [e(v_k); e(x) * e(v_k); (e(x) - e(v_k))^2]
//    whose two logits are softmaxed into P(view k is weak). Sharing the
//    scorer across views makes the head equivariant to swapping the views.
//  - scorer: an affine projection d_hid -> d_proj used by the contrastive
//    objective; inference compares encoder outputs by cosine.
class ChoiceNetwork {
 public:
  ChoiceNetwork() = default;
  ChoiceNetwork(std::size_t vocab_size, const ChoiceConfig& config, std::uint64_t seed);

  const ChoiceConfig& config() const { return config_; }
  CriterionKind kind() const { return config_.kind; }
  const Encoder& encoder() const { return encoder_; }
  Encoder& encoder() { return encoder_; }
  Parameter& pair_weight() { return pair_weight_; }
  Parameter& projection_weight() { return proj_weight_; }

  // Parameters of the encoder and the active head.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  // Distribution over {view 1 is weak, view 2 is weak} (classifier head).
  Var head_distribution(Graph& g, const Example& original, const Example& view1,
                        const Example& view2);
  ProbabilityVector head_distribution(const Example& original, const Example& view1,
                                      const Example& view2) const;
  // Projected embedding for the contrastive objective (scorer head).
  Var project(Graph& g, std::span<const int> tokens);

 private:
  template <class Self>
  static Var head_impl(Self& self, Graph& g, const Example& original, const Example& view1,
                       const Example& view2);

  ChoiceConfig config_;
  Encoder encoder_;
  Parameter pair_weight_;  // 1 x 3*d_hid
  Parameter pair_bias_;    // 1
  Parameter proj_weight_;  // d_proj x d_hid
  Parameter proj_bias_;    // d_proj
};

// Similarity of `augmented` to `original`; higher means a weaker
// augmentation. Classifier: negative cross-entropy between main-network
// predictions. Scorer: cosine of the choice network's encodings.
double criterion_score(CriterionKind kind, const Example& original, const Example& augmented,
                       std::size_t label, const MainNetwork& main, const ChoiceNetwork& choice);

struct ChoiceItem {
  const Example* original = nullptr;
  const Example* view1 = nullptr;
  const Example* view2 = nullptr;
  int weak_index = 1;
};

// Mean objective over `items`. Classifier: cross-entropy of the head
// distribution against weak_index. Scorer: contrastive loss with anchor
// z(x), positive z(weak), negatives z(strong) plus both projected views of
// every other item.
Var choice_loss(Graph& g, ChoiceNetwork& choice, std::span<const ChoiceItem> items);
double choice_loss(ChoiceNetwork& choice, const ChoiceItem& item);

// One optimizer step on the choice network's parameters only. Returns the
// loss before the step. The scorer objective needs at least two items.
double update_choice_network(ChoiceNetwork& choice, std::span<const ChoiceItem> items,
                             Optimizer& optimizer);
double update_choice_network(ChoiceNetwork& choice, std::span<const ChoiceItem> items,
                             double beta);

// Ranks two views of an unlabeled example without updating anything.
StrengthRanking infer_choice(const Example& unlabeled, const Example& view1,
                             const Example& view2, const ChoiceNetwork& choice);

}  // namespace sat

#endif  // SAT_AUG_CHOICE_HPP
