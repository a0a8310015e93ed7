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

#ifndef SAT_SYNTHETIC_HPP
#define SAT_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sat/trainer.hpp"

namespace sat {

// A separable bag-of-words classification task. Each class owns a block of
// signal words; the rest of the vocabulary is shared noise. A document mixes
// signal words of its class with noise words and contains at least one
// signal word.
//
// The lexicon maps every word to synonyms from its own block, so synonym
// replacement and insertion preserve the label. The mock translation tables
// round-trip most words unchanged and paraphrase a fixed fraction of them
// into a synonym.
struct SyntheticSpec {
  std::size_t classes = 4;
  std::size_t vocab_size = 500;
  std::size_t signal_words_per_class = 40;
  std::size_t min_length = 8;
  std::size_t max_length = 16;
  double signal_fraction = 0.4;
  std::size_t train_per_class = 520;  // labeled candidates + unlabeled
  std::size_t dev_per_class = 50;
  std::size_t test_per_class = 100;
  std::size_t synonyms_per_word = 2;
  double paraphrase_fraction = 0.2;
  std::uint64_t seed = 7;
};

Dataset make_synthetic(const SyntheticSpec& spec);

// Training settings for the synthetic benchmark, as config key/value pairs.
// aug1 is heavy word dropout and aug2 is back-translation, so a fixed
// aug1-is-weak assignment gets the strengths backwards.
const std::vector<std::pair<std::string, std::string>>& synthetic_settings();

// synthetic_settings() applied on top of the defaults.
TrainConfig synthetic_config();

// Writes train.jsonl, dev.jsonl, test.jsonl, lexicon.tsv, bt_forward.tsv,
// bt_backward.tsv and a matching sat.conf into `dir`.
void write_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir);

}  // namespace sat

#endif  // SAT_SYNTHETIC_HPP
