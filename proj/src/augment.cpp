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

#include "sat/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sat/error.hpp"

namespace sat {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

void require_rate(double rate, const char* what) {
  if (!(rate > 0.0 && rate < 1.0)) {
    throw ConfigError(std::string(what) + " must lie in (0,1), got " + std::to_string(rate));
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    auto b = item.find_first_not_of(" \t\r");
    auto e = item.find_last_not_of(" \t\r");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::map<std::string, std::string> first_targets(const SynonymLexicon& table) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : table.entries()) out.emplace(k, v.front());
  return out;
}

}  // namespace

std::string to_string(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::kIdentity: return "none";
    case AugmentKind::kSynonymReplacement: return "sr";
    case AugmentKind::kPervasiveDropout: return "pd";
    case AugmentKind::kRandomInsertion: return "ri";
    case AugmentKind::kBackTranslation: return "bt";
  }
  return "?";
}

AugmentKind parse_augment_kind(const std::string& name) {
  if (name == "none") return AugmentKind::kIdentity;
  if (name == "sr") return AugmentKind::kSynonymReplacement;
  if (name == "pd") return AugmentKind::kPervasiveDropout;
  if (name == "ri") return AugmentKind::kRandomInsertion;
  if (name == "bt") return AugmentKind::kBackTranslation;
  throw ConfigError("unknown augmentation '" + name + "' (expected sr|pd|ri|bt|none)");
}

// --- lexicon ------------------------------------------------------------------

void SynonymLexicon::add(const std::string& token, std::vector<std::string> synonyms) {
  std::erase(synonyms, token);
  std::vector<std::string> unique;
  for (auto& s : synonyms) {
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(std::move(s));
  }
  if (unique.empty()) return;
  auto& slot = entries_[token];
  for (auto& s : unique) {
    if (std::find(slot.begin(), slot.end(), s) == slot.end()) slot.push_back(std::move(s));
  }
}

const std::vector<std::string>* SynonymLexicon::find(const std::string& token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> SynonymLexicon::all_tokens() const {
  std::set<std::string> all;
  for (const auto& [k, v] : entries_) {
    all.insert(k);
    all.insert(v.begin(), v.end());
  }
  return {all.begin(), all.end()};
}

SynonymLexicon SynonymLexicon::read_tsv(std::istream& in, const std::string& name) {
  SynonymLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(name + ":" + std::to_string(lineno) + ": expected token<TAB>syn1,syn2,...");
    }
    lex.add(line.substr(0, tab), split_csv(line.substr(tab + 1)));
  }
  return lex;
}

SynonymLexicon SynonymLexicon::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_tsv(in, path.string());
}

void SynonymLexicon::write_tsv(std::ostream& out) const {
  for (const auto& [k, v] : entries_) {
    out << k << '\t';
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << '\n';
  }
}

// --- translation ----------------------------------------------------------------

DictionaryTranslationProvider::DictionaryTranslationProvider(
    std::map<std::string, std::string> forward, std::map<std::string, std::string> backward)
    : forward_(std::move(forward)), backward_(std::move(backward)) {}

DictionaryTranslationProvider DictionaryTranslationProvider::load(
    const std::filesystem::path& forward, const std::filesystem::path& backward) {
  return DictionaryTranslationProvider(first_targets(SynonymLexicon::load_tsv(forward)),
                                       first_targets(SynonymLexicon::load_tsv(backward)));
}

Words DictionaryTranslationProvider::translate(std::span<const std::string> tokens,
                                               Direction dir) const {
  const auto& table = dir == Direction::kForward ? forward_ : backward_;
  Words out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto it = table.find(t);
    out.push_back(it == table.end() ? t : it->second);
  }
  return out;
}

std::vector<std::string> DictionaryTranslationProvider::all_tokens() const {
  std::set<std::string> all;
  for (const auto& [k, v] : backward_) all.insert(v);
  return {all.begin(), all.end()};
}

// --- operators ----------------------------------------------------------------------

std::size_t round_count(double rate, std::size_t n) {
  return static_cast<std::size_t>(std::floor(rate * static_cast<double>(n) + 0.5));
}

Words synonym_replace(std::span<const std::string> tokens, const SynonymLexicon& lexicon,
                      double rate, Rng& rng) {
  Words out(tokens.begin(), tokens.end());
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (lexicon.find(out[i]) != nullptr) eligible.push_back(i);
  }
  const std::size_t k = std::min(round_count(rate, eligible.size()), eligible.size());
  if (k == 0) return out;
  std::vector<std::size_t> chosen;
  std::sample(eligible.begin(), eligible.end(), std::back_inserter(chosen), k, rng);
  for (std::size_t pos : chosen) {
    const auto& syns = *lexicon.find(out[pos]);
    out[pos] = syns[uniform_index(rng, syns.size())];
  }
  return out;
}

Words pervasive_dropout(std::span<const std::string> tokens, double drop_prob, Rng& rng) {
  if (drop_prob <= 0.0 || tokens.empty()) return {tokens.begin(), tokens.end()};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Words out;
  for (const auto& t : tokens) {
    if (u(rng) >= drop_prob) out.push_back(t);
  }
  if (out.empty()) out.push_back(tokens[uniform_index(rng, tokens.size())]);
  return out;
}

Words random_insert(std::span<const std::string> tokens, double insert_rate,
                    const SynonymLexicon& lexicon, Rng& rng) {
  Words out(tokens.begin(), tokens.end());
  std::vector<const std::vector<std::string>*> sources;
  for (const auto& t : tokens) {
    if (const auto* syns = lexicon.find(t)) sources.push_back(syns);
  }
  if (sources.empty() || insert_rate <= 0.0) return out;
  const std::size_t k = std::max<std::size_t>(1, round_count(insert_rate, tokens.size()));
  for (std::size_t i = 0; i < k; ++i) {
    const auto& syns = *sources[uniform_index(rng, sources.size())];
    const std::string& word = syns[uniform_index(rng, syns.size())];
    const std::size_t pos = uniform_index(rng, out.size() + 1);
    out.insert(out.begin() + static_cast<long>(pos), word);
  }
  return out;
}

Words back_translate(std::span<const std::string> tokens, const TranslationProvider& provider) {
  Words out;
  try {
    Words pivot = provider.translate(tokens, Direction::kForward);
    out = provider.translate(pivot, Direction::kBackward);
  } catch (const AugmentationError&) {
    throw;
  } catch (const std::exception& e) {
    throw AugmentationError(std::string("back-translation failed: ") + e.what());
  }
  if (out.empty()) throw AugmentationError("back-translation produced no tokens");
  return out;
}

// --- Augmenter ---------------------------------------------------------------------

Augmenter Augmenter::identity() { return Augmenter(AugmentKind::kIdentity, 0.0); }

Augmenter Augmenter::synonym_replacement(std::shared_ptr<const SynonymLexicon> lexicon,
                                         double rate) {
  require_rate(rate, "replace_rate");
  if (!lexicon) throw ConfigError("synonym replacement needs a lexicon");
  Augmenter a(AugmentKind::kSynonymReplacement, rate);
  a.lexicon_ = std::move(lexicon);
  return a;
}

Augmenter Augmenter::pervasive_dropout(double drop_prob) {
  require_rate(drop_prob, "drop_prob");
  return Augmenter(AugmentKind::kPervasiveDropout, drop_prob);
}

Augmenter Augmenter::random_insertion(std::shared_ptr<const SynonymLexicon> lexicon,
                                      double rate) {
  require_rate(rate, "insert_rate");
  if (!lexicon) throw ConfigError("random insertion needs a lexicon");
  Augmenter a(AugmentKind::kRandomInsertion, rate);
  a.lexicon_ = std::move(lexicon);
  return a;
}

Augmenter Augmenter::back_translation(std::shared_ptr<const TranslationProvider> provider) {
  if (!provider) throw ConfigError("back-translation needs a provider");
  Augmenter a(AugmentKind::kBackTranslation, 0.0);
  a.provider_ = std::move(provider);
  return a;
}

Words Augmenter::apply(std::span<const std::string> tokens, Rng& rng) const {
  switch (kind_) {
    case AugmentKind::kIdentity: return {tokens.begin(), tokens.end()};
    case AugmentKind::kSynonymReplacement: return synonym_replace(tokens, *lexicon_, rate_, rng);
    case AugmentKind::kPervasiveDropout: return sat::pervasive_dropout(tokens, rate_, rng);
    case AugmentKind::kRandomInsertion: return random_insert(tokens, rate_, *lexicon_, rng);
    case AugmentKind::kBackTranslation: return back_translate(tokens, *provider_);
  }
  return {tokens.begin(), tokens.end()};
}

std::pair<Example, Example> apply_pair(const Example& example, const Augmenter& a1,
                                       const Augmenter& a2, const Vocab& vocab, Rng& rng) {
  if (a1.kind() == a2.kind()) {
    throw ConfigError("the two augmentations must use different techniques, both are " +
                      to_string(a1.kind()));
  }
  std::pair<Example, Example> views;
  for (auto [aug, view] : {std::pair{&a1, &views.first}, std::pair{&a2, &views.second}}) {
    view->id = example.id;
    view->label = example.label;
    view->words = aug->apply(example.words, rng);
    view->tokens = vocab.encode(view->words);
    view->text.clear();
    if (aug->kind() == AugmentKind::kIdentity) {
      view->text = example.text;
      continue;
    }
    for (std::size_t i = 0; i < view->words.size(); ++i) {
      if (i) view->text += ' ';
      view->text += view->words[i];
    }
  }
  return views;
}

}  // namespace sat
