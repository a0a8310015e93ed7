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

#include "sat/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>

#include "sat/config.hpp"
#include "sat/error.hpp"

namespace sat {

namespace {

struct Generated {
  TaskSpec task;
  std::vector<Example> train, dev, test;
  SynonymLexicon lexicon;
  SynonymLexicon forward, backward;  // single-target tables
};

std::string word_name(std::size_t i) { return "w" + std::to_string(i); }

Generated generate(const SyntheticSpec& spec) {
  if (spec.classes < 2) throw ConfigError("synthetic task needs >= 2 classes");
  if (spec.signal_words_per_class * spec.classes >= spec.vocab_size) {
    throw ConfigError("signal blocks must leave room for noise words");
  }
  if (spec.min_length == 0 || spec.max_length < spec.min_length) {
    throw ConfigError("bad synthetic document length range");
  }
  std::mt19937_64 rng(spec.seed);

  // Random assignment of surface forms to blocks.
  std::vector<std::size_t> perm(spec.vocab_size);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<std::string>> blocks(spec.classes + 1);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const std::size_t block = std::min(i / spec.signal_words_per_class, spec.classes);
    blocks[block].push_back(word_name(perm[i]));
  }

  Generated out;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.classes; ++c) names.push_back("class" + std::to_string(c));
  out.task = TaskSpec(names);

  for (const auto& block : blocks) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      std::vector<std::string> syns;
      for (std::size_t k = 1; k <= spec.synonyms_per_word && k < block.size(); ++k) {
        syns.push_back(block[(i + k) % block.size()]);
      }
      out.lexicon.add(block[i], syns);
    }
  }

  std::bernoulli_distribution paraphrase(spec.paraphrase_fraction);
  for (const auto& block : blocks) {
    for (const auto& w : block) {
      const std::string pivot = "de_" + w;
      out.forward.add(w, {pivot});
      const auto* syns = out.lexicon.find(w);
      out.backward.add(pivot, {paraphrase(rng) && syns != nullptr ? syns->front() : w});
    }
  }

  std::uniform_int_distribution<std::size_t> length(spec.min_length, spec.max_length);
  std::bernoulli_distribution signal(spec.signal_fraction);
  const auto& noise = blocks.back();
  auto document = [&](std::size_t c) {
    const auto& own = blocks[c];
    std::vector<std::string> words(length(rng));
    bool has_signal = false;
    for (auto& w : words) {
      if (signal(rng)) {
        w = own[std::uniform_int_distribution<std::size_t>(0, own.size() - 1)(rng)];
        has_signal = true;
      } else {
        w = noise[std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng)];
      }
    }
    if (!has_signal) {
      words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)] =
          own[std::uniform_int_distribution<std::size_t>(0, own.size() - 1)(rng)];
    }
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    return text;
  };
  auto make_split = [&](std::size_t per_class, std::uint32_t source) {
    std::vector<Example> v;
    std::uint32_t line = 0;
    // Interleave classes so that file order carries no label structure.
    for (std::size_t i = 0; i < per_class; ++i) {
      for (std::size_t c = 0; c < spec.classes; ++c) {
        Example ex;
        ex.id = {source, ++line};
        ex.text = document(c);
        ex.words = tokenize(ex.text);
        ex.label = c;
        v.push_back(std::move(ex));
      }
    }
    return v;
  };
  out.train = make_split(spec.train_per_class, 0);
  out.dev = make_split(spec.dev_per_class, 2);
  out.test = make_split(spec.test_per_class, 3);
  return out;
}

std::map<std::string, std::string> single(const SynonymLexicon& table) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : table.entries()) m.emplace(k, v.front());
  return m;
}

}  // namespace

Dataset make_synthetic(const SyntheticSpec& spec) {
  Generated g = generate(spec);
  Dataset d;
  d.task = g.task;
  d.pool = std::move(g.train);
  d.dev = std::move(g.dev);
  d.test = std::move(g.test);
  d.lexicon = std::make_shared<SynonymLexicon>(std::move(g.lexicon));
  d.translator = std::make_shared<DictionaryTranslationProvider>(single(g.forward),
                                                                 single(g.backward));
  return d;
}

const std::vector<std::pair<std::string, std::string>>& synthetic_settings() {
  static const std::vector<std::pair<std::string, std::string>> settings = {
      {"n_c", "10"},         {"unlabeled_per_class", "500"}, {"epochs", "30"},
      {"optimizer", "adam"}, {"eta", "0.003"},               {"beta", "0.001"},
      {"aug1", "pd"},        {"pd_prob", "0.6"},             {"aug2", "bt"},
  };
  return settings;
}

TrainConfig synthetic_config() {
  TrainConfig cfg;
  for (const auto& [key, value] : synthetic_settings()) set_config_value(cfg, key, value);
  return cfg;
}

void write_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir) {
  Generated g = generate(spec);
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("train.jsonl");
    write_jsonl(f, g.train, g.task);
  }
  {
    auto f = open("dev.jsonl");
    write_jsonl(f, g.dev, g.task);
  }
  {
    auto f = open("test.jsonl");
    write_jsonl(f, g.test, g.task);
  }
  {
    auto f = open("lexicon.tsv");
    g.lexicon.write_tsv(f);
  }
  {
    auto f = open("bt_forward.tsv");
    g.forward.write_tsv(f);
  }
  {
    auto f = open("bt_backward.tsv");
    g.backward.write_tsv(f);
  }
  {
    auto f = open("sat.conf");
    f << "# synthetic benchmark corpus\n"
         "train_file = train.jsonl\n"
         "dev_file = dev.jsonl\n"
         "test_file = test.jsonl\n"
         "lexicon_file = lexicon.tsv\n"
         "bt_forward_file = bt_forward.tsv\n"
         "bt_backward_file = bt_backward.tsv\n";
    for (const auto& [key, value] : synthetic_settings()) f << key << " = " << value << '\n';
  }
}

}  // namespace sat
