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

#include "sat/model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sat/error.hpp"

namespace sat {

namespace {

Tensor uniform_tensor(Shape shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kInitRange, kInitRange);
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.data()) v = u(rng);
  return t;
}

template <class Enc>
Var encode_impl(Enc& enc, Graph& g, std::span<const int> tokens) {
  Var pooled = embedding_mean(g.param(enc.embedding), tokens, Vocab::kPad);
  return tanh(affine(pooled, g.param(enc.weight), g.param(enc.bias)));
}

}  // namespace

// --- Encoder --------------------------------------------------------------------

Encoder::Encoder(std::size_t vocab_size, const ModelDims& dims, std::mt19937_64& rng,
                 const std::string& prefix)
    : embedding(prefix + "embedding", uniform_tensor({vocab_size, dims.d_emb}, rng)),
      weight(prefix + "hidden.weight", uniform_tensor({dims.d_hid, dims.d_emb}, rng)),
      bias(prefix + "hidden.bias", Tensor::zeros({dims.d_hid})) {}

Var Encoder::encode(Graph& g, std::span<const int> tokens) {
  return encode_impl(*this, g, tokens);
}

Var Encoder::encode(Graph& g, std::span<const int> tokens) const {
  return encode_impl(*this, g, tokens);
}

std::vector<double> Encoder::encode(std::span<const int> tokens) const {
  Graph g(false);
  auto v = encode(g, tokens).value();
  return {v.begin(), v.end()};
}

std::vector<Parameter*> Encoder::parameters() { return {&embedding, &weight, &bias}; }

std::vector<const Parameter*> Encoder::parameters() const {
  return {&embedding, &weight, &bias};
}

// --- MainNetwork ------------------------------------------------------------------

MainNetwork::MainNetwork(std::size_t vocab_size, std::size_t classes, const ModelDims& dims,
                         std::uint64_t seed) {
  if (vocab_size < 3) throw ConfigError("vocabulary too small");
  if (classes < 2) throw ConfigError("need at least two classes");
  if (dims.d_emb == 0 || dims.d_hid == 0) throw ConfigError("model dimensions must be positive");
  std::mt19937_64 rng(seed);
  encoder_ = Encoder(vocab_size, dims, rng, "main.");
  out_weight_ = Parameter("main.output.weight", uniform_tensor({classes, dims.d_hid}, rng));
  out_bias_ = Parameter("main.output.bias", Tensor::zeros({classes}));
}

ModelDims MainNetwork::dims() const {
  return {encoder_.embedding.value.cols(), encoder_.dim()};
}

template <class Self>
Var MainNetwork::forward(Self& self, Graph& g, std::span<const int> tokens) {
  Var h = self.encoder_.encode(g, tokens);
  return softmax(affine(h, g.param(self.out_weight_), g.param(self.out_bias_)));
}

Var MainNetwork::predict_proba(Graph& g, std::span<const int> tokens) {
  return forward(*this, g, tokens);
}

Var MainNetwork::predict_proba(Graph& g, std::span<const int> tokens) const {
  return forward(*this, g, tokens);
}

ProbabilityVector MainNetwork::predict_proba(std::span<const int> tokens) const {
  Graph g(false);
  auto p = predict_proba(g, tokens).value();
  return ProbabilityVector({p.begin(), p.end()});
}

Var MainNetwork::supervised_loss(Graph& g, std::span<const Example* const> batch) {
  if (batch.empty()) throw UsageError("supervised loss of an empty batch");
  std::vector<Var> losses;
  losses.reserve(batch.size());
  for (const Example* ex : batch) {
    if (!ex->label) throw UsageError("unlabeled example in a labeled batch");
    losses.push_back(cross_entropy(*ex->label, predict_proba(g, ex->tokens)));
  }
  return scale(sum(losses), 1.0 / static_cast<double>(batch.size()));
}

std::vector<Parameter*> MainNetwork::parameters() {
  auto p = encoder_.parameters();
  p.push_back(&out_weight_);
  p.push_back(&out_bias_);
  return p;
}

std::vector<const Parameter*> MainNetwork::parameters() const {
  auto p = encoder_.parameters();
  p.push_back(&out_weight_);
  p.push_back(&out_bias_);
  return p;
}

std::vector<Tensor> MainNetwork::snapshot() const {
  std::vector<Tensor> out;
  for (const Parameter* p : parameters()) out.push_back(p->value);
  return out;
}

void MainNetwork::restore(std::span<const Tensor> values) {
  auto params = parameters();
  if (values.size() != params.size()) throw UsageError("snapshot does not match network");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (values[i].shape() != params[i]->value.shape()) {
      throw UsageError("snapshot shape mismatch for " + params[i]->name);
    }
    params[i]->value = values[i];
  }
}

// --- checkpoints --------------------------------------------------------------------
//
// Text format, one record per line:
//   sat-checkpoint 1
//   dims <d_emb> <d_hid>
//   classes <n>          followed by n JSON-quoted class names
//   vocab <n>            followed by n tokens (ids 0..n-1)
//   tensors <n>          followed by n pairs of lines:
//     <name> <rank> <dim0> ... <dimk>
//     <values, shortest round-trip decimal, space separated>

Checkpoint make_checkpoint(const MainNetwork& net, const TaskSpec& task, const Vocab& vocab) {
  Checkpoint c{task, vocab, net.dims(), {}};
  for (const Parameter* p : net.parameters()) c.tensors.emplace_back(p->name, p->value);
  return c;
}

MainNetwork network_from_checkpoint(const Checkpoint& ckpt) {
  MainNetwork net(ckpt.vocab.size(), ckpt.task.classes(), ckpt.dims, 0);
  auto params = net.parameters();
  if (params.size() != ckpt.tensors.size()) {
    throw DataError("checkpoint holds " + std::to_string(ckpt.tensors.size()) +
                    " tensors, network expects " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, t] = ckpt.tensors[i];
    if (name != params[i]->name || t.shape() != params[i]->value.shape()) {
      throw DataError("checkpoint tensor '" + name + "' " + shape_string(t.shape()) +
                      " does not match '" + params[i]->name + "' " +
                      shape_string(params[i]->value.shape()));
    }
    params[i]->value = t;
  }
  return net;
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << "sat-checkpoint 1\n";
  out << "dims " << ckpt.dims.d_emb << ' ' << ckpt.dims.d_hid << '\n';
  out << "classes " << ckpt.task.classes() << '\n';
  for (const auto& name : ckpt.task.class_names()) out << nlohmann::json(name).dump() << '\n';
  out << "vocab " << ckpt.vocab.size() << '\n';
  for (std::size_t i = 0; i < ckpt.vocab.size(); ++i) {
    out << ckpt.vocab.token(static_cast<int>(i)) << '\n';
  }
  out << "tensors " << ckpt.tensors.size() << '\n';
  char buf[64];
  for (const auto& [name, t] : ckpt.tensors) {
    out << name << ' ' << t.shape().size();
    for (std::size_t d : t.shape()) out << ' ' << d;
    out << '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto res = std::to_chars(buf, buf + sizeof(buf), t[i]);
      if (i) out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  auto fail = [](const std::string& why) { return DataError("bad checkpoint: " + why); };
  std::string line;
  auto next = [&]() -> std::string& {
    if (!std::getline(in, line)) throw fail("unexpected end of file");
    return line;
  };
  auto header = [&](const std::string& key) {
    std::istringstream is(next());
    std::string k;
    std::size_t n = 0;
    if (!(is >> k >> n) || k != key) throw fail("expected '" + key + " <count>'");
    return n;
  };
  if (next() != "sat-checkpoint 1") throw fail("missing 'sat-checkpoint 1' header");
  Checkpoint c;
  {
    std::istringstream is(next());
    std::string k;
    if (!(is >> k >> c.dims.d_emb >> c.dims.d_hid) || k != "dims") throw fail("expected dims");
  }
  std::vector<std::string> names(header("classes"));
  for (auto& n : names) {
    try {
      n = nlohmann::json::parse(next()).get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw fail("class name is not a JSON string");
    }
  }
  c.task = TaskSpec(std::move(names));
  const std::size_t vocab_size = header("vocab");
  for (std::size_t i = 0; i < vocab_size; ++i) {
    const std::string& tok = next();
    if (i >= 2 && c.vocab.add(tok) != static_cast<int>(i)) throw fail("duplicate token " + tok);
    if (i < 2 && c.vocab.token(static_cast<int>(i)) != tok) throw fail("reserved tokens missing");
  }
  const std::size_t count = header("tensors");
  for (std::size_t k = 0; k < count; ++k) {
    std::istringstream is(next());
    std::string name;
    std::size_t rank = 0;
    if (!(is >> name >> rank) || rank == 0) throw fail("bad tensor header");
    Shape shape(rank);
    for (auto& d : shape) {
      if (!(is >> d)) throw fail("bad tensor shape for " + name);
    }
    std::vector<double> values;
    values.reserve(shape_size(shape));
    const std::string& data = next();
    const char* p = data.data();
    const char* end = data.data() + data.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) throw fail("bad number in tensor " + name);
      values.push_back(v);
      p = res.ptr;
    }
    try {
      c.tensors.emplace_back(name, Tensor(std::move(shape), std::move(values)));
    } catch (const ConfigError& e) {
      throw fail(e.what());
    }
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace sat
