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

#ifndef SAT_CORPUS_HPP
#define SAT_CORPUS_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sat {

// Identity of an example: which file it came from and its 1-based line.
struct ExampleId {
  std::uint32_t source = 0;
  std::uint32_t line = 0;
  friend auto operator<=>(const ExampleId&, const ExampleId&) = default;
};

struct Example {
  ExampleId id;
  std::string text;
  std::vector<std::string> words;  // tokenized surface forms
  std::vector<int> tokens;         // vocabulary ids of `words`
  std::optional<std::size_t> label;

  friend bool operator==(const Example&, const Example&) = default;
};

class TaskSpec {
 public:
  TaskSpec() = default;
  explicit TaskSpec(std::vector<std::string> class_names);

  std::size_t classes() const { return names_.size(); }
  const std::vector<std::string>& class_names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  // Returns the existing index or appends a new class.
  std::size_t intern(const std::string& name);
  void validate() const;

 private:
  std::vector<std::string> names_;
};

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab();

  int add(const std::string& token);
  // kUnk for out-of-vocabulary tokens.
  int id(const std::string& token) const;
  const std::string& token(int id) const;
  std::size_t size() const { return tokens_.size(); }
  bool contains(const std::string& token) const;

  std::vector<int> encode(std::span<const std::string> words) const;
  void encode(Example& example) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

struct SplitSet {
  std::vector<Example> labeled;
  std::vector<Example> unlabeled;
  std::vector<Example> dev;
  std::vector<Example> test;
};

struct LoadedData {
  std::vector<Example> examples;
  TaskSpec task;
};

// Lowercases, splits on whitespace and strips leading/trailing punctuation
// from each token. Throws DegenerateInputError when nothing remains.
std::vector<std::string> tokenize(std::string_view text);

// Reads one JSON object per line with a required "text" string and an
// optional "label" string. With `fixed_task` set, unknown labels are
// errors; otherwise classes are interned in order of first appearance.
// Blank lines are skipped. Errors cite the 1-based line number.
LoadedData load_jsonl(std::istream& in, std::uint32_t source,
                      std::optional<TaskSpec> fixed_task = std::nullopt,
                      const std::string& name = "<stream>");
LoadedData load_jsonl(const std::filesystem::path& path, std::uint32_t source,
                      std::optional<TaskSpec> fixed_task = std::nullopt);

void write_jsonl(std::ostream& out, std::span<const Example> examples,
                 const TaskSpec& task);

// Exactly `per_class` labeled examples of each class, chosen with a seeded
// RNG and returned in pool order.
std::vector<Example> sample_labeled(std::span<const Example> pool,
                                    std::size_t per_class, std::size_t classes,
                                    std::uint64_t seed);

// At most `per_class` examples per class (0 = keep all), seeded, pool order.
std::vector<Example> cap_per_class(std::span<const Example> pool,
                                   std::size_t per_class, std::size_t classes,
                                   std::uint64_t seed);

struct SplitSizes {
  std::size_t labeled_per_class = 10;
  std::size_t unlabeled_per_class = 0;  // 0 = everything not labeled
  std::size_t dev_per_class = 0;        // 0 = all
  std::size_t test_per_class = 0;       // 0 = all
};

// Labeled examples are drawn from `pool`; the remainder of the pool loses
// its labels and becomes unlabeled data, followed by `extra_unlabeled`.
SplitSet make_split(std::span<const Example> pool,
                    std::span<const Example> extra_unlabeled,
                    std::span<const Example> dev, std::span<const Example> test,
                    std::size_t classes, const SplitSizes& sizes,
                    std::uint64_t seed);

// Vocabulary over labeled + unlabeled training words plus `extra` tokens
// (augmentation resources). Dev and test text never contributes.
Vocab build_vocab(const SplitSet& split,
                  std::span<const std::string> extra = {});
void encode_all(const Vocab& vocab, SplitSet& split);

// Throws DataError if an identity appears in two splits.
void check_disjoint(const SplitSet& split);

struct Batch {
  std::vector<const Example*> labeled;    // exactly B
  std::vector<const Example*> unlabeled;  // exactly mu * B
};

// Paired labeled / unlabeled batch streams. An epoch is one pass over the
// shuffled unlabeled pool (trailing remainder dropped); the labeled pool is
// cycled and reshuffled whenever it runs out, across epoch boundaries.
class BatchStream {
 public:
  BatchStream(const SplitSet& split, std::size_t batch_size, std::size_t mu,
              std::uint64_t seed);

  std::size_t steps_per_epoch() const;
  std::vector<Batch> next_epoch();

 private:
  const Example* next_labeled();

  const SplitSet* split_;
  std::size_t batch_size_;
  std::size_t mu_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> labeled_order_;
  std::size_t labeled_pos_ = 0;
};

}  // namespace sat

#endif  // SAT_CORPUS_HPP
