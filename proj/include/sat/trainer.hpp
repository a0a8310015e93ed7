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

#ifndef SAT_TRAINER_HPP
#define SAT_TRAINER_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sat/aug_choice.hpp"
#include "sat/augment.hpp"
#include "sat/config.hpp"
#include "sat/corpus.hpp"
#include "sat/metrics.hpp"
#include "sat/model.hpp"
#include "sat/optim.hpp"

namespace sat {

// Raw inputs of an experiment before any seeded sampling.
struct Dataset {
  TaskSpec task;
  std::vector<Example> pool;  // labeled candidates
  std::vector<Example> extra_unlabeled;
  std::vector<Example> dev;
  std::vector<Example> test;
  std::shared_ptr<const SynonymLexicon> lexicon;
  std::shared_ptr<const DictionaryTranslationProvider> translator;
};

// Reads every file named by the config. Dev and test labels must belong to
// the classes seen in the training file.
Dataset load_dataset(const TrainConfig& cfg);

// A seeded split with its vocabulary; every example is encoded.
struct PreparedData {
  TaskSpec task;
  SplitSet split;
  Vocab vocab;
};

PreparedData prepare_data(const Dataset& data, const TrainConfig& cfg);

struct AugmenterPair {
  Augmenter first;
  Augmenter second;
};

AugmenterPair make_augmenters(const TrainConfig& cfg, const Dataset& data);

enum class Method {
  kSat,
  kSupervised,  // lambda_u forced to 0, no augmentation or choice network
  kFixMatch,    // alpha_1 always weak, alpha_2 always strong, no choice network
};

std::string to_string(Method m);
// "sat", "supervised", "fixmatch".
Method parse_method(const std::string& name);

// Independent RNG seeds derived from the run seed, one per consumer, so
// that e.g. augmentation never shifts the main network's randomness.
struct SeedPlan {
  explicit SeedPlan(std::uint64_t seed);
  std::uint64_t split, batches, main_init, choice_init, augment;
};

struct UnsupervisedLoss {
  Var loss;
  double coverage = 0.0;  // fraction of items whose weak view passed tau
};

// Consistency loss over precomputed weak-view distributions (constants,
// i.e. detached pseudo-label sources) and strong-view probability nodes:
//   (1/N) sum_b 1{max q_b > tau} H(argmax q_b, p_b)
// N counts every item, including those that fail the threshold. Items with
// no strong node (`strong[b]` invalid) contribute zero.
UnsupervisedLoss unsupervised_loss(Graph& g, std::span<const ProbabilityVector> weak,
                                   std::span<const Var> strong, double tau);

// Views of one unlabeled example; `ok` is false when augmentation failed.
struct UnlabeledViews {
  const Example* original = nullptr;
  Example view1;
  Example view2;
  bool ok = false;
};

// Model-level form: the weak view of each item is chosen by its ranking.
UnsupervisedLoss unsupervised_loss(Graph& g, std::span<const UnlabeledViews> batch,
                                   std::span<const StrengthRanking> rankings,
                                   MainNetwork& main, double tau);

// l_s + lambda_u * l_u.
Var total_loss(Var l_s, Var l_u, double lambda_u);
double total_loss(double l_s, double l_u, double lambda_u);

struct StepReport {
  double loss_s = 0.0;
  double loss_u = 0.0;
  double loss_aug_choice = 0.0;
  double loss_total = 0.0;
  double coverage = 0.0;
  std::size_t skipped = 0;  // examples dropped after an augmentation failure
};

// Owns both networks and their optimizers for one run.
class Trainer {
 public:
  Trainer(const TrainConfig& cfg, Method method, const PreparedData& data,
          AugmenterPair augmenters);

  // One loop body of the algorithm, in order: supervised loss, criterion
  // ranking of the labeled views, choice network step, ranking of the
  // unlabeled views with the updated choice network, thresholded
  // consistency loss, main network step.
  StepReport train_step(const Batch& batch);

  MainNetwork& main() { return main_; }
  const MainNetwork& main() const { return main_; }
  ChoiceNetwork* choice() { return choice_ ? &*choice_ : nullptr; }
  Method method() const { return method_; }

 private:
  const TrainConfig cfg_;
  const Method method_;
  const PreparedData* data_;
  AugmenterPair aug_;
  Rng aug_rng_;
  MainNetwork main_;
  std::optional<ChoiceNetwork> choice_;
  std::unique_ptr<Optimizer> main_opt_;
  std::unique_ptr<Optimizer> choice_opt_;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  Metrics dev;
  double loss_s = 0.0;
  double loss_u = 0.0;
  double loss_aug_choice = 0.0;
  double coverage = 0.0;
};

struct RunMetrics {
  std::vector<EpochMetrics> epochs;
  Metrics test;
};

struct RunRecord {
  TrainConfig config;
  Method method = Method::kSat;
  RunMetrics metrics;
  std::size_t best_epoch = 0;
  double wall_seconds = 0.0;
  std::filesystem::path checkpoint;  // empty unless an output dir was given
};

struct RunOptions {
  std::filesystem::path out_dir;  // writes metrics.csv, best.ckpt, config.txt
  std::ostream* log = nullptr;
};

// Trains for up to cfg.epochs epochs, evaluating on dev after each. Stops
// after cfg.patience epochs without a dev-accuracy improvement, restores the
// best epoch (earliest on ties) and evaluates it on test.
RunRecord run_experiment(const TrainConfig& cfg, const Dataset& data,
                         Method method = Method::kSat, const RunOptions& options = {});
RunRecord run_experiment(const TrainConfig& cfg, const Dataset& data,
                         const PreparedData& prepared, Method method,
                         const RunOptions& options = {});

enum class BaselineKind { kSupervisedOnly, kFixedFixMatch };
RunRecord run_baseline(BaselineKind kind, const TrainConfig& cfg, const Dataset& data,
                       const RunOptions& options = {});

// `epoch,split,accuracy,macro_f1,loss_s,loss_u,loss_aug_choice,coverage`
// One dev row per epoch, then one test row (epoch = best epoch, losses
// empty).
void write_metrics_csv(std::ostream& out, const RunRecord& record);

}  // namespace sat

#endif  // SAT_TRAINER_HPP
