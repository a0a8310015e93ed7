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

#include "sat/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "sat/error.hpp"

namespace sat {

// --- TaskSpec ---------------------------------------------------------------

TaskSpec::TaskSpec(std::vector<std::string> class_names)
    : names_(std::move(class_names)) {
  validate();
}

std::optional<std::size_t> TaskSpec::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t TaskSpec::intern(const std::string& name) {
  if (auto i = index_of(name)) return *i;
  names_.push_back(name);
  return names_.size() - 1;
}

void TaskSpec::validate() const {
  if (names_.size() < 2) {
    throw DataError("a task needs at least two classes, found " +
                    std::to_string(names_.size()));
  }
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw DataError("class names are not unique");
}

// --- Vocab ------------------------------------------------------------------

Vocab::Vocab() {
  add("<pad>");
  add("<unk>");
}

int Vocab::add(const std::string& token) {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

int Vocab::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw DataError("token id " + std::to_string(id) + " not in vocabulary");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

bool Vocab::contains(const std::string& token) const {
  return ids_.contains(token);
}

std::vector<int> Vocab::encode(std::span<const std::string> words) const {
  std::vector<int> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(id(w));
  return out;
}

void Vocab::encode(Example& example) const { example.tokens = encode(example.words); }

// --- tokenization and loading ---------------------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i, e = j;
    while (b < e && std::ispunct(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) {
      std::string tok(text.substr(b, e - b));
      for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(tok));
    }
    i = j;
  }
  if (out.empty()) throw DegenerateInputError("text has no tokens");
  return out;
}

LoadedData load_jsonl(std::istream& in, std::uint32_t source,
                      std::optional<TaskSpec> fixed_task, const std::string& name) {
  LoadedData data;
  const bool fixed = fixed_task.has_value();
  if (fixed) data.task = std::move(*fixed_task);
  std::string line;
  std::uint32_t lineno = 0;
  auto fail = [&](const std::string& why) {
    return DataError(name + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw fail("expected a JSON object");
    auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) throw fail("missing string field \"text\"");
    Example ex;
    ex.id = {source, lineno};
    ex.text = text->get<std::string>();
    try {
      ex.words = tokenize(ex.text);
    } catch (const DegenerateInputError&) {
      throw fail("empty text");
    }
    if (auto label = obj.find("label"); label != obj.end() && !label->is_null()) {
      if (!label->is_string()) throw fail("field \"label\" must be a string");
      const auto name_str = label->get<std::string>();
      if (fixed) {
        auto idx = data.task.index_of(name_str);
        if (!idx) throw fail("unknown label \"" + name_str + "\"");
        ex.label = *idx;
      } else {
        ex.label = data.task.intern(name_str);
      }
    }
    data.examples.push_back(std::move(ex));
  }
  return data;
}

LoadedData load_jsonl(const std::filesystem::path& path, std::uint32_t source,
                      std::optional<TaskSpec> fixed_task) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return load_jsonl(in, source, std::move(fixed_task), path.string());
}

void write_jsonl(std::ostream& out, std::span<const Example> examples,
                 const TaskSpec& task) {
  for (const Example& ex : examples) {
    nlohmann::json obj;
    obj["text"] = ex.text;
    if (ex.label) obj["label"] = task.class_names().at(*ex.label);
    out << obj.dump() << '\n';
  }
}

// --- sampling -------------------------------------------------------------------

namespace {

std::vector<std::vector<std::size_t>> indices_by_class(std::span<const Example> pool,
                                                       std::size_t classes) {
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!pool[i].label) continue;
    if (*pool[i].label >= classes) {
      throw DataError("label " + std::to_string(*pool[i].label) + " out of range");
    }
    by_class[*pool[i].label].push_back(i);
  }
  return by_class;
}

std::vector<Example> pick(std::span<const Example> pool, std::vector<std::size_t> chosen) {
  std::sort(chosen.begin(), chosen.end());
  std::vector<Example> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(pool[i]);
  return out;
}

}  // namespace

std::vector<Example> sample_labeled(std::span<const Example> pool, std::size_t per_class,
                                    std::size_t classes, std::uint64_t seed) {
  if (per_class == 0) throw ConfigError("N_c must be positive");
  auto by_class = indices_by_class(pool, classes);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < classes; ++c) {
    auto& idx = by_class[c];
    if (idx.size() < per_class) {
      throw DataError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                      " examples, " + std::to_string(per_class) + " required");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<long>(per_class));
  }
  return pick(pool, std::move(chosen));
}

std::vector<Example> cap_per_class(std::span<const Example> pool, std::size_t per_class,
                                   std::size_t classes, std::uint64_t seed) {
  if (per_class == 0) return {pool.begin(), pool.end()};
  auto by_class = indices_by_class(pool, classes);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (auto& idx : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t n = std::min(per_class, idx.size());
    chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<long>(n));
  }
  return pick(pool, std::move(chosen));
}

SplitSet make_split(std::span<const Example> pool, std::span<const Example> extra_unlabeled,
                    std::span<const Example> dev, std::span<const Example> test,
                    std::size_t classes, const SplitSizes& sizes, std::uint64_t seed) {
  std::seed_seq seq{seed, std::uint64_t{0x5a7}};
  std::vector<std::uint64_t> seeds(4);
  seq.generate(seeds.begin(), seeds.end());

  SplitSet split;
  split.labeled = sample_labeled(pool, sizes.labeled_per_class, classes, seeds[0]);
  std::set<ExampleId> taken;
  for (const auto& ex : split.labeled) taken.insert(ex.id);
  std::vector<Example> rest;
  for (const auto& ex : pool) {
    if (!taken.contains(ex.id)) rest.push_back(ex);
  }
  // Labels of the remaining pool are only used for the per-class cap.
  split.unlabeled = cap_per_class(rest, sizes.unlabeled_per_class, classes, seeds[1]);
  for (auto& ex : split.unlabeled) ex.label.reset();
  split.unlabeled.insert(split.unlabeled.end(), extra_unlabeled.begin(),
                         extra_unlabeled.end());
  for (auto& ex : split.unlabeled) ex.label.reset();
  split.dev = cap_per_class(dev, sizes.dev_per_class, classes, seeds[2]);
  split.test = cap_per_class(test, sizes.test_per_class, classes, seeds[3]);
  check_disjoint(split);
  return split;
}

Vocab build_vocab(const SplitSet& split, std::span<const std::string> extra) {
  Vocab vocab;
  for (const auto* part : {&split.labeled, &split.unlabeled}) {
    for (const auto& ex : *part) {
      for (const auto& w : ex.words) vocab.add(w);
    }
  }
  for (const auto& w : extra) vocab.add(w);
  return vocab;
}

void encode_all(const Vocab& vocab, SplitSet& split) {
  for (auto* part : {&split.labeled, &split.unlabeled, &split.dev, &split.test}) {
    for (auto& ex : *part) vocab.encode(ex);
  }
}

void check_disjoint(const SplitSet& split) {
  std::set<ExampleId> seen;
  for (const auto* part : {&split.labeled, &split.unlabeled, &split.dev, &split.test}) {
    for (const auto& ex : *part) {
      if (!seen.insert(ex.id).second) {
        throw DataError("example from source " + std::to_string(ex.id.source) + " line " +
                        std::to_string(ex.id.line) + " appears in more than one split");
      }
    }
  }
}

// --- batches ------------------------------------------------------------------------

BatchStream::BatchStream(const SplitSet& split, std::size_t batch_size, std::size_t mu,
                         std::uint64_t seed)
    : split_(&split), batch_size_(batch_size), mu_(mu), rng_(seed) {
  if (batch_size == 0 || mu == 0) throw ConfigError("B and mu must be positive");
  if (split.labeled.empty()) throw ConfigError("labeled pool is empty");
  for (const auto& ex : split.labeled) {
    if (!ex.label) throw UsageError("labeled pool contains an unlabeled example");
  }
  if (split.unlabeled.size() < batch_size * mu) {
    throw ConfigError("mu*B = " + std::to_string(batch_size * mu) +
                      " exceeds the unlabeled pool of " +
                      std::to_string(split.unlabeled.size()));
  }
  labeled_order_.resize(split.labeled.size());
  for (std::size_t i = 0; i < labeled_order_.size(); ++i) labeled_order_[i] = i;
  std::shuffle(labeled_order_.begin(), labeled_order_.end(), rng_);
}

std::size_t BatchStream::steps_per_epoch() const {
  return split_->unlabeled.size() / (batch_size_ * mu_);
}

const Example* BatchStream::next_labeled() {
  if (labeled_pos_ == labeled_order_.size()) {
    std::shuffle(labeled_order_.begin(), labeled_order_.end(), rng_);
    labeled_pos_ = 0;
  }
  return &split_->labeled[labeled_order_[labeled_pos_++]];
}

std::vector<Batch> BatchStream::next_epoch() {
  std::vector<std::size_t> order(split_->unlabeled.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng_);
  const std::size_t ub = batch_size_ * mu_;
  std::vector<Batch> out(steps_per_epoch());
  for (std::size_t s = 0; s < out.size(); ++s) {
    Batch& b = out[s];
    b.labeled.reserve(batch_size_);
    for (std::size_t i = 0; i < batch_size_; ++i) b.labeled.push_back(next_labeled());
    b.unlabeled.reserve(ub);
    for (std::size_t i = 0; i < ub; ++i) {
      b.unlabeled.push_back(&split_->unlabeled[order[s * ub + i]]);
    }
  }
  return out;
}

}  // namespace sat
