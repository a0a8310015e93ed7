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

#include "sat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "sat/error.hpp"

namespace sat {

namespace {

void require_same_shape(Var a, Var b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ConfigError(std::string(op) + ": shape mismatch " +
                      shape_string(a.shape()) + " vs " +
                      shape_string(b.shape()));
  }
}

void require_same_graph(Var a, Var b) {
  if (&a.graph() != &b.graph()) {
    throw UsageError("operands belong to different graphs");
  }
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

// --- Var --------------------------------------------------------------------

const Shape& Var::shape() const { return graph_->shape(id_); }
std::size_t Var::size() const { return graph_->value(id_).size(); }
std::span<const double> Var::value() const { return graph_->value(id_); }

double Var::item() const {
  auto v = value();
  if (v.size() != 1) throw UsageError("item() on a non-scalar node");
  return v[0];
}

Tensor Var::to_tensor() const {
  auto v = value();
  return Tensor(shape(), std::vector<double>(v.begin(), v.end()));
}

// --- Graph ------------------------------------------------------------------

Var Graph::make(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Graph::constant(Tensor t) {
  Node n;
  n.shape = t.shape();
  n.value = std::move(t.data());
  return make(std::move(n));
}

Var Graph::param(Parameter& p) {
  if (auto it = bound_.find(&p); it != bound_.end()) {
    return Var(this, it->second);
  }
  if (p.grad.shape() != p.value.shape()) p.zero_grad();
  Node n;
  n.shape = p.value.shape();
  n.param = &p;
  n.trainable = &p;
  n.requires_grad = record_;
  Var v = make(std::move(n));
  bound_.emplace(&p, v.id());
  return v;
}

Var Graph::param(const Parameter& p) {
  if (auto it = bound_const_.find(&p); it != bound_const_.end()) {
    return Var(this, it->second);
  }
  Node n;
  n.shape = p.value.shape();
  n.param = &p;
  Var v = make(std::move(n));
  bound_const_.emplace(&p, v.id());
  return v;
}

Var Graph::push(Shape shape, std::vector<double> values,
                std::initializer_list<Var> inputs, Backward fn) {
  return push(std::move(shape), std::move(values),
              std::span<const Var>(inputs.begin(), inputs.size()),
              std::move(fn));
}

Var Graph::push(Shape shape, std::vector<double> values,
                std::span<const Var> inputs, Backward fn) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in forward pass");
  }
  Node n;
  n.shape = std::move(shape);
  n.value = std::move(values);
  if (record_) {
    for (const Var& in : inputs) {
      if (&in.graph() != this) throw UsageError("input from a different graph");
      if (nodes_[in.id()].requires_grad) n.requires_grad = true;
    }
    if (n.requires_grad) n.backward = std::move(fn);
  }
  return make(std::move(n));
}

const Shape& Graph::shape(std::size_t id) const { return nodes_[id].shape; }

std::span<const double> Graph::value(std::size_t id) const {
  const Node& n = nodes_[id];
  if (n.param != nullptr) return n.param->value.values();
  return n.value;
}

std::span<double> Graph::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return {};
  if (n.trainable != nullptr) return n.trainable->grad.values();
  if (n.grad.size() != n.value.size()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

void Graph::backward(Var loss) {
  if (!record_) throw UsageError("backward on a graph that records no gradients");
  if (&loss.graph() != this) throw UsageError("loss belongs to a different graph");
  if (loss.size() != 1) {
    throw UsageError("backward requires a scalar loss, got shape " +
                     shape_string(loss.shape()));
  }
  for (Node& n : nodes_) n.grad.clear();
  if (!nodes_[loss.id()].requires_grad) return;
  Node& root = nodes_[loss.id()];
  if (root.trainable != nullptr) {
    root.trainable->grad[0] += 1.0;
    return;
  }
  root.grad.assign(1, 1.0);
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.backward && !n.grad.empty()) n.backward(*this, i);
  }
  for (Node& n : nodes_) n.grad.clear();
}

// --- operations ---------------------------------------------------------------

Var affine(Var input, Var weight, Var bias) {
  require_same_graph(input, weight);
  require_same_graph(input, bias);
  const Shape& ws = weight.shape();
  if (ws.size() != 2 || input.size() != ws[1] || bias.size() != ws[0]) {
    throw ConfigError("affine: shapes do not conform: input " +
                      shape_string(input.shape()) + ", weight " +
                      shape_string(ws) + ", bias " +
                      shape_string(bias.shape()));
  }
  const std::size_t m = ws[0], n = ws[1];
  auto x = input.value();
  auto w = weight.value();
  auto b = bias.value();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = b[i];
    const double* row = w.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    out[i] = s;
  }
  Graph& g = input.graph();
  return g.push({m}, std::move(out), {input, weight, bias},
                [xi = input.id(), wi = weight.id(), bi = bias.id(), m, n](
                    Graph& g, std::size_t self) {
                  auto go = g.grad(self);
                  auto x = g.value(xi);
                  auto w = g.value(wi);
                  if (auto gb = g.grad(bi); !gb.empty()) {
                    for (std::size_t i = 0; i < m; ++i) gb[i] += go[i];
                  }
                  if (auto gw = g.grad(wi); !gw.empty()) {
                    for (std::size_t i = 0; i < m; ++i) {
                      double* row = gw.data() + i * n;
                      for (std::size_t j = 0; j < n; ++j) row[j] += go[i] * x[j];
                    }
                  }
                  if (auto gx = g.grad(xi); !gx.empty()) {
                    for (std::size_t i = 0; i < m; ++i) {
                      const double* row = w.data() + i * n;
                      for (std::size_t j = 0; j < n; ++j) gx[j] += go[i] * row[j];
                    }
                  }
                });
}

Var tanh(Var x) {
  auto v = x.value();
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
  return x.graph().push(x.shape(), std::move(out), {x},
                        [xi = x.id()](Graph& g, std::size_t self) {
                          auto gx = g.grad(xi);
                          auto go = g.grad(self);
                          auto y = g.value(self);
                          for (std::size_t i = 0; i < gx.size(); ++i) {
                            gx[i] += go[i] * (1.0 - y[i] * y[i]);
                          }
                        });
}

Var add(Var a, Var b) {
  require_same_graph(a, b);
  require_same_shape(a, b, "add");
  auto av = a.value(), bv = b.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return a.graph().push(a.shape(), std::move(out), {a, b},
                        [ai = a.id(), bi = b.id()](Graph& g, std::size_t self) {
                          auto go = g.grad(self);
                          if (auto ga = g.grad(ai); !ga.empty()) {
                            for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i];
                          }
                          if (auto gb = g.grad(bi); !gb.empty()) {
                            for (std::size_t i = 0; i < go.size(); ++i) gb[i] += go[i];
                          }
                        });
}

Var sub(Var a, Var b) { return add(a, scale(b, -1.0)); }

Var mul(Var a, Var b) {
  require_same_graph(a, b);
  require_same_shape(a, b, "mul");
  auto av = a.value(), bv = b.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return a.graph().push(a.shape(), std::move(out), {a, b},
                        [ai = a.id(), bi = b.id()](Graph& g, std::size_t self) {
                          auto go = g.grad(self);
                          auto av = g.value(ai), bv = g.value(bi);
                          if (auto ga = g.grad(ai); !ga.empty()) {
                            for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * bv[i];
                          }
                          if (auto gb = g.grad(bi); !gb.empty()) {
                            for (std::size_t i = 0; i < go.size(); ++i) gb[i] += go[i] * av[i];
                          }
                        });
}

Var scale(Var x, double k) {
  auto v = x.value();
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = k * v[i];
  return x.graph().push(x.shape(), std::move(out), {x},
                        [xi = x.id(), k](Graph& g, std::size_t self) {
                          auto gx = g.grad(xi);
                          auto go = g.grad(self);
                          for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += k * go[i];
                        });
}

Var square(Var x) { return mul(x, x); }

Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value()) s += v;
  return x.graph().push({1}, {s}, {x}, [xi = x.id()](Graph& g, std::size_t self) {
    auto gx = g.grad(xi);
    double go = g.grad(self)[0];
    for (double& v : gx) v += go;
  });
}

Var sum(std::span<const Var> scalars) {
  if (scalars.empty()) throw UsageError("sum of an empty list");
  Graph& g = scalars.front().graph();
  double s = 0.0;
  std::vector<std::size_t> ids;
  ids.reserve(scalars.size());
  for (const Var& v : scalars) {
    s += v.item();
    ids.push_back(v.id());
  }
  return g.push({1}, {s}, scalars, [ids = std::move(ids)](Graph& g, std::size_t self) {
    double go = g.grad(self)[0];
    for (std::size_t id : ids) {
      if (auto gi = g.grad(id); !gi.empty()) gi[0] += go;
    }
  });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw UsageError("concat of an empty list");
  Graph& g = parts.front().graph();
  std::vector<double> out;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // (id, offset)
  for (const Var& p : parts) {
    spans.emplace_back(p.id(), out.size());
    auto v = p.value();
    out.insert(out.end(), v.begin(), v.end());
  }
  const std::size_t n = out.size();
  return g.push({n}, std::move(out), parts,
                [spans = std::move(spans)](Graph& g, std::size_t self) {
                  auto go = g.grad(self);
                  for (auto [id, off] : spans) {
                    auto gi = g.grad(id);
                    for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += go[off + i];
                  }
                });
}

Var dot(Var a, Var b) { return sum(mul(a, b)); }

Var embedding_mean(Var table, std::span<const int> ids, int pad_id) {
  const Shape& ts = table.shape();
  if (ts.size() != 2) throw ConfigError("embedding table must be 2-D");
  const std::size_t rows = ts[0], dim = ts[1];
  // Rows are visited in id order with weight count/n, which makes the result
  // bitwise independent of token order and of uniform repetition.
  std::map<std::size_t, std::size_t> counts;
  std::size_t n = 0;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= rows) {
      throw DataError("token id " + std::to_string(id) +
                      " outside embedding table of " + std::to_string(rows) +
                      " rows");
    }
    if (id != pad_id) {
      ++counts[static_cast<std::size_t>(id)];
      ++n;
    }
  }
  if (n == 0) throw DegenerateInputError("all tokens are padding");
  std::vector<std::pair<std::size_t, double>> weights;
  weights.reserve(counts.size());
  for (auto [r, c] : counts) {
    weights.emplace_back(r, static_cast<double>(c) / static_cast<double>(n));
  }
  auto t = table.value();
  std::vector<double> out(dim, 0.0);
  for (auto [r, w] : weights) {
    const double* row = t.data() + r * dim;
    for (std::size_t j = 0; j < dim; ++j) out[j] += w * row[j];
  }
  return table.graph().push(
      {dim}, std::move(out), {table},
      [ti = table.id(), weights = std::move(weights), dim](Graph& g, std::size_t self) {
        auto gt = g.grad(ti);
        auto go = g.grad(self);
        for (auto [r, w] : weights) {
          double* row = gt.data() + r * dim;
          for (std::size_t j = 0; j < dim; ++j) row[j] += w * go[j];
        }
      });
}

Var softmax(Var logits) {
  ProbabilityVector p = softmax(logits.value());
  std::vector<double> out(p.probs().begin(), p.probs().end());
  return logits.graph().push(logits.shape(), std::move(out), {logits},
                             [li = logits.id()](Graph& g, std::size_t self) {
                               auto gl = g.grad(li);
                               auto go = g.grad(self);
                               auto p = g.value(self);
                               double inner = 0.0;
                               for (std::size_t i = 0; i < p.size(); ++i) inner += go[i] * p[i];
                               for (std::size_t i = 0; i < p.size(); ++i) {
                                 gl[i] += p[i] * (go[i] - inner);
                               }
                             });
}

Var cross_entropy(std::size_t target, Var predicted) {
  auto p = predicted.value();
  if (target >= p.size()) {
    throw DataError("class index " + std::to_string(target) + " out of range for " +
                    std::to_string(p.size()) + " classes");
  }
  const double pt = p[target];
  const double loss = -std::log(std::max(pt, kProbFloor));
  return predicted.graph().push({1}, {loss}, {predicted},
                                [pi = predicted.id(), target](Graph& g, std::size_t self) {
                                  const double pt = g.value(pi)[target];
                                  if (pt > kProbFloor) g.grad(pi)[target] -= g.grad(self)[0] / pt;
                                });
}

Var cross_entropy(std::span<const double> target, Var predicted) {
  auto p = predicted.value();
  if (target.size() != p.size()) throw ConfigError("cross_entropy: class count mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    loss -= target[i] * std::log(std::max(p[i], kProbFloor));
  }
  std::vector<double> q(target.begin(), target.end());
  return predicted.graph().push({1}, {loss}, {predicted},
                                [pi = predicted.id(), q = std::move(q)](Graph& g, std::size_t self) {
                                  auto p = g.value(pi);
                                  auto gp = g.grad(pi);
                                  const double go = g.grad(self)[0];
                                  for (std::size_t i = 0; i < p.size(); ++i) {
                                    if (p[i] > kProbFloor) gp[i] -= go * q[i] / p[i];
                                  }
                                });
}

Var cosine_similarity(Var a, Var b) {
  require_same_graph(a, b);
  require_same_shape(a, b, "cosine_similarity");
  const double c = cosine_similarity(a.value(), b.value());
  return a.graph().push({1}, {c}, {a, b}, [ai = a.id(), bi = b.id()](Graph& g, std::size_t self) {
    auto av = g.value(ai), bv = g.value(bi);
    const double na = norm(av), nb = norm(bv);
    const double c = g.value(self)[0];
    const double go = g.grad(self)[0];
    if (auto ga = g.grad(ai); !ga.empty()) {
      for (std::size_t i = 0; i < av.size(); ++i) {
        ga[i] += go * (bv[i] / (na * nb) - c * av[i] / (na * na));
      }
    }
    if (auto gb = g.grad(bi); !gb.empty()) {
      for (std::size_t i = 0; i < bv.size(); ++i) {
        gb[i] += go * (av[i] / (na * nb) - c * bv[i] / (nb * nb));
      }
    }
  });
}

Var contrastive_loss(Var anchor, Var positive, std::span<const Var> negatives,
                     double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  std::vector<Var> logits;
  logits.reserve(negatives.size() + 1);
  logits.push_back(scale(cosine_similarity(anchor, positive), 1.0 / temperature));
  for (const Var& n : negatives) {
    logits.push_back(scale(cosine_similarity(anchor, n), 1.0 / temperature));
  }
  return cross_entropy(0, softmax(concat(logits)));
}

// --- plain values -------------------------------------------------------------

ProbabilityVector softmax(std::span<const double> logits) {
  if (logits.size() < 2) throw ConfigError("softmax needs at least two logits");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - mx);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return ProbabilityVector(std::move(p));
}

double cross_entropy(std::size_t target, const ProbabilityVector& predicted) {
  if (target >= predicted.classes()) {
    throw DataError("class index " + std::to_string(target) + " out of range for " +
                    std::to_string(predicted.classes()) + " classes");
  }
  return -std::log(std::max(predicted[target], kProbFloor));
}

double cross_entropy(std::span<const double> target, const ProbabilityVector& predicted) {
  if (target.size() != predicted.classes()) {
    throw ConfigError("cross_entropy: class count mismatch");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    loss -= target[i] * std::log(std::max(predicted[i], kProbFloor));
  }
  return loss;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("cosine_similarity: length mismatch");
  double d = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) {
    throw DegenerateInputError("cosine similarity of a zero-norm vector");
  }
  // sqrt(x * x) == |x| in IEEE arithmetic, so cos(a, a) is exactly 1.
  return std::clamp(d / std::sqrt(aa * bb), -1.0, 1.0);
}

}  // namespace sat
