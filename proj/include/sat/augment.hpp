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

#ifndef SAT_AUGMENT_HPP
#define SAT_AUGMENT_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sat/corpus.hpp"

namespace sat {

using Rng = std::mt19937_64;
using Words = std::vector<std::string>;

enum class AugmentKind {
  kIdentity,  // control augmenter, returns its input
  kSynonymReplacement,
  kPervasiveDropout,
  kRandomInsertion,
  kBackTranslation,
};

// "none", "sr", "pd", "ri", "bt".
std::string to_string(AugmentKind kind);
AugmentKind parse_augment_kind(const std::string& name);

// token -> synonyms. Entries whose only synonym is the token itself are
// dropped, and a token never lists itself.
class SynonymLexicon {
 public:
  void add(const std::string& token, std::vector<std::string> synonyms);
  const std::vector<std::string>* find(const std::string& token) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // Every key and synonym, sorted and unique.
  std::vector<std::string> all_tokens() const;
  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }

  // `token<TAB>syn1,syn2,...` per line.
  static SynonymLexicon read_tsv(std::istream& in, const std::string& name = "<stream>");
  static SynonymLexicon load_tsv(const std::filesystem::path& path);
  void write_tsv(std::ostream& out) const;

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

enum class Direction { kForward, kBackward };

class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;
  virtual Words translate(std::span<const std::string> tokens, Direction dir) const = 0;
};

// Word-by-word dictionary translation; unmapped tokens pass through. The
// shipped tables are deliberately not inverses of each other, so a round
// trip paraphrases some tokens.
class DictionaryTranslationProvider final : public TranslationProvider {
 public:
  DictionaryTranslationProvider(std::map<std::string, std::string> forward,
                                std::map<std::string, std::string> backward);

  // Tables use the lexicon TSV format; the first listed target is used.
  static DictionaryTranslationProvider load(const std::filesystem::path& forward,
                                            const std::filesystem::path& backward);

  Words translate(std::span<const std::string> tokens, Direction dir) const override;
  std::vector<std::string> all_tokens() const;

 private:
  std::map<std::string, std::string> forward_;
  std::map<std::string, std::string> backward_;
};

// Replacement and insertion counts round half up: floor(rate * n + 0.5).
std::size_t round_count(double rate, std::size_t n);

Words synonym_replace(std::span<const std::string> tokens, const SynonymLexicon& lexicon,
                      double rate, Rng& rng);
Words pervasive_dropout(std::span<const std::string> tokens, double drop_prob, Rng& rng);
Words random_insert(std::span<const std::string> tokens, double insert_rate,
                    const SynonymLexicon& lexicon, Rng& rng);
// Throws AugmentationError carrying the provider's message on failure.
Words back_translate(std::span<const std::string> tokens, const TranslationProvider& provider);

struct AugmenterDefaults {
  static constexpr double kReplaceRate = 0.30;
  static constexpr double kDropProb = 0.10;
  static constexpr double kInsertRate = 0.10;
};

// One augmentation technique with its configuration. Immutable; randomness
// comes from the RNG passed to apply().
class Augmenter {
 public:
  static Augmenter identity();
  static Augmenter synonym_replacement(std::shared_ptr<const SynonymLexicon> lexicon,
                                       double rate = AugmenterDefaults::kReplaceRate);
  static Augmenter pervasive_dropout(double drop_prob = AugmenterDefaults::kDropProb);
  static Augmenter random_insertion(std::shared_ptr<const SynonymLexicon> lexicon,
                                    double rate = AugmenterDefaults::kInsertRate);
  static Augmenter back_translation(std::shared_ptr<const TranslationProvider> provider);

  AugmentKind kind() const { return kind_; }
  double rate() const { return rate_; }
  Words apply(std::span<const std::string> tokens, Rng& rng) const;

 private:
  Augmenter(AugmentKind kind, double rate) : kind_(kind), rate_(rate) {}

  AugmentKind kind_;
  double rate_ = 0.0;
  std::shared_ptr<const SynonymLexicon> lexicon_;
  std::shared_ptr<const TranslationProvider> provider_;
};

// Two independent augmented views of `example`, re-encoded with `vocab`.
// Labels and identity carry over; `example` is not modified. An identity
// view keeps the original text verbatim.
std::pair<Example, Example> apply_pair(const Example& example, const Augmenter& a1,
                                       const Augmenter& a2, const Vocab& vocab, Rng& rng);

}  // namespace sat

#endif  // SAT_AUGMENT_HPP
