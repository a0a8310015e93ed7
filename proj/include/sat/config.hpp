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

#ifndef SAT_CONFIG_HPP
#define SAT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "sat/aug_choice.hpp"

namespace sat {

// Every knob of a training run. The file form is flat `key = value` lines;
// `#` starts a comment and unknown keys are errors.
struct TrainConfig {
  // Training loop.
  std::size_t batch_size = 32;  // B
  std::size_t mu = 3;           // unlabeled batch = mu * B
  double lambda_u = 1.0;
  double tau = 0.95;
  double beta = 1e-4;  // choice network rate
  double eta = 1e-3;   // main network rate
  std::string optimizer = "sgd";
  std::size_t epochs = 50;
  std::size_t patience = 10;
  std::uint64_t seed = 0;

  // Augmentation choice.
  CriterionKind criterion = CriterionKind::kScorer;
  ClassifierSimilarity classifier_similarity = ClassifierSimilarity::kDistributional;
  std::size_t d_proj = 32;
  double temperature = 0.5;

  // Augmentations (alpha_1, alpha_2) and their parameters.
  std::string aug1 = "bt";
  std::string aug2 = "sr";
  double sr_rate = 0.30;
  double pd_prob = 0.10;
  double ri_rate = 0.10;

  // Model.
  std::size_t d_emb = 32;
  std::size_t d_hid = 64;

  // Data.
  std::size_t n_c = 10;
  std::size_t unlabeled_per_class = 0;
  std::size_t dev_per_class = 0;
  std::size_t test_per_class = 0;
  std::string train_file;      // labeled pool (JSONL)
  std::string unlabeled_file;  // optional extra unlabeled text
  std::string dev_file;
  std::string test_file;
  std::string lexicon_file;      // synonym TSV (sr, ri)
  std::string bt_forward_file;   // mock translation tables (bt)
  std::string bt_backward_file;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// Parses key = value text. Relative file paths are resolved against
// `base_dir`.
TrainConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {},
                         const std::string& name = "<config>");
TrainConfig load_config(const std::filesystem::path& path);

// Applies one `key=value` assignment.
void set_config_value(TrainConfig& cfg, const std::string& key, const std::string& value);

// Canonical text form, one key per line in a fixed order; parse_config
// reads it back to an equal config.
std::string format_config(const TrainConfig& cfg);

}  // namespace sat

#endif  // SAT_CONFIG_HPP
