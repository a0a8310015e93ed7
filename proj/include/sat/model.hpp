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

#ifndef SAT_MODEL_HPP
#define SAT_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sat/corpus.hpp"
#include "sat/graph.hpp"

namespace sat {

struct ModelDims {
  std::size_t d_emb = 32;
  std::size_t d_hid = 64;
  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

inline constexpr double kInitRange = 0.1;

// Bag-of-words encoder: tanh(W * mean(E[tokens]) + b). PAD tokens are
// skipped by the mean; an all-PAD input is a DegenerateInputError.
class Encoder {
 public:
  Encoder() = default;
  Encoder(std::size_t vocab_size, const ModelDims& dims, std::mt19937_64& rng,
          const std::string& prefix);

  Var encode(Graph& g, std::span<const int> tokens);
  Var encode(Graph& g, std::span<const int> tokens) const;
  std::vector<double> encode(std::span<const int> tokens) const;

  std::size_t dim() const { return bias.value.size(); }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  Parameter embedding;  // |V| x d_emb
  Parameter weight;     // d_hid x d_emb
  Parameter bias;       // d_hid
};

// The main classifier f(.; theta): encoder followed by an affine output
// layer and a softmax over classes.
class MainNetwork {
 public:
  MainNetwork() = default;
  MainNetwork(std::size_t vocab_size, std::size_t classes, const ModelDims& dims,
              std::uint64_t seed);

  std::size_t classes() const { return out_bias_.value.size(); }
  std::size_t vocab_size() const { return encoder_.embedding.value.rows(); }
  ModelDims dims() const;

  Var encode(Graph& g, std::span<const int> tokens) { return encoder_.encode(g, tokens); }
  Var predict_proba(Graph& g, std::span<const int> tokens);
  Var predict_proba(Graph& g, std::span<const int> tokens) const;
  std::vector<double> encode(std::span<const int> tokens) const {
    return encoder_.encode(tokens);
  }
  ProbabilityVector predict_proba(std::span<const int> tokens) const;

  // (1/B) sum_b H(y_b, p(y|x_b)). UsageError on an unlabeled example.
  Var supervised_loss(Graph& g, std::span<const Example* const> batch);

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  Encoder& encoder() { return encoder_; }
  const Encoder& encoder() const { return encoder_; }
  Parameter& output_weight() { return out_weight_; }
  Parameter& output_bias() { return out_bias_; }

  std::vector<Tensor> snapshot() const;
  void restore(std::span<const Tensor> values);

 private:
  template <class Self>
  static Var forward(Self& self, Graph& g, std::span<const int> tokens);

  Encoder encoder_;
  Parameter out_weight_;  // classes x d_hid
  Parameter out_bias_;    // classes
};

// Everything needed to run a trained classifier on new text.
struct Checkpoint {
  TaskSpec task;
  Vocab vocab;
  ModelDims dims;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

Checkpoint make_checkpoint(const MainNetwork& net, const TaskSpec& task, const Vocab& vocab);
MainNetwork network_from_checkpoint(const Checkpoint& ckpt);

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sat

#endif  // SAT_MODEL_HPP
