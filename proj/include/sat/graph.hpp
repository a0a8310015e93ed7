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

#ifndef SAT_GRAPH_HPP
#define SAT_GRAPH_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sat/tensor.hpp"

namespace sat {

// Probabilities are clamped to this floor before taking a logarithm.
inline constexpr double kProbFloor = 1e-12;

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while its Graph lives.
class Var {
 public:
  Var() = default;

  Graph& graph() const { return *graph_; }
  std::size_t id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }

  const Shape& shape() const;
  std::size_t size() const;
  std::span<const double> value() const;
  double item() const;
  Tensor to_tensor() const;

 private:
  friend class Graph;
  Var(Graph* graph, std::size_t id) : graph_(graph), id_(id) {}

  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
};

// Tape of forward operations. Nodes are appended in evaluation order, so the
// reverse of creation order is a valid topological order for backward().
//
// A Graph built with record_gradients=false keeps values only; it is the
// cheap path for inference. Parameters are bound by reference: their values
// are read in place and backward() accumulates straight into
// Parameter::grad.
class Graph {
 public:
  using Backward = std::function<void(Graph&, std::size_t self)>;

  explicit Graph(bool record_gradients = true)
      : record_(record_gradients) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool records() const { return record_; }
  std::size_t node_count() const { return nodes_.size(); }

  Var constant(Tensor t);
  // Binds a trainable parameter; backward() accumulates into p.grad.
  Var param(Parameter& p);
  // Binds a parameter read-only: no gradient flows into it.
  Var param(const Parameter& p);

  // Seeds d(loss)/d(loss) = 1 and runs every recorded backward function in
  // reverse order. Each call adds the full gradient once more.
  void backward(Var loss);

  // --- used by operation implementations ---
  Var push(Shape shape, std::vector<double> values,
           std::initializer_list<Var> inputs, Backward fn);
  Var push(Shape shape, std::vector<double> values,
           std::span<const Var> inputs, Backward fn);

  const Shape& shape(std::size_t id) const;
  std::span<const double> value(std::size_t id) const;
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Gradient buffer for `id`; empty span when the node needs no gradient.
  std::span<double> grad(std::size_t id);

 private:
  struct Node {
    Shape shape;
    std::vector<double> value;
    const Parameter* param = nullptr;
    Parameter* trainable = nullptr;
    bool requires_grad = false;
    std::vector<double> grad;
    Backward backward;
  };

  Var make(Node node);

  bool record_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> bound_;
  std::unordered_map<const Parameter*, std::size_t> bound_const_;
};

// ---------------------------------------------------------------------------
// Differentiable operations.

// out[i] = sum_j weight[i][j] * input[j] + bias[i]
Var affine(Var input, Var weight, Var bias);
Var tanh(Var x);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var x, double k);
Var square(Var x);
Var sum(Var x);  // all entries -> scalar
Var sum(std::span<const Var> scalars);
Var concat(std::span<const Var> parts);
Var dot(Var a, Var b);
// Mean of table rows selected by `ids`, skipping `pad_id`.
Var embedding_mean(Var table, std::span<const int> ids, int pad_id = 0);

// Max-subtracted softmax over a vector of c >= 2 logits.
Var softmax(Var logits);
// -ln(max(p[target], kProbFloor)).
Var cross_entropy(std::size_t target, Var predicted);
// -sum_i q[i] ln(max(p[i], kProbFloor)); q is treated as a constant.
Var cross_entropy(std::span<const double> target, Var predicted);
Var cosine_similarity(Var a, Var b);

// Normalized-temperature contrastive loss for one anchor:
//   -ln( exp(cos(a,pos)/T) / sum_{n in {pos} u negatives} exp(cos(a,n)/T) )
Var contrastive_loss(Var anchor, Var positive, std::span<const Var> negatives,
                     double temperature);

// ---------------------------------------------------------------------------
// Plain-value counterparts, used by oracles and by no-gradient code paths.

ProbabilityVector softmax(std::span<const double> logits);
double cross_entropy(std::size_t target, const ProbabilityVector& predicted);
double cross_entropy(std::span<const double> target,
                     const ProbabilityVector& predicted);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace sat

#endif  // SAT_GRAPH_HPP
