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

#ifndef SAT_TENSOR_HPP
#define SAT_TENSOR_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sat {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major array of doubles. The constructor enforces
// product(shape) == values.size() and positive dimensions.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values);

  static Tensor zeros(Shape shape);
  static Tensor vector(std::vector<double> values);
  static Tensor scalar(double v);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::size_t rows() const { return shape_.empty() ? 1 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const {
    return values_[r * cols() + c];
  }

  bool all_finite() const;
  void fill(double v);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

// A trainable tensor with its accumulated gradient. `grad` always has the
// shape of `value`; gradients are added by backward passes, never
// overwritten, so callers zero them explicitly between updates.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  std::string name;
  Tensor value;
  Tensor grad;
  // Optimizer accumulators (empty until an adaptive optimizer touches them).
  Tensor moment1;
  Tensor moment2;

  void zero_grad();
};

// A categorical distribution over c classes.
class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  // Validates entries in [0,1] summing to 1 within 1e-6.
  explicit ProbabilityVector(std::vector<double> probs);

  std::size_t classes() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  // Index of the largest entry; ties go to the lowest index.
  std::size_t argmax() const;
  double max() const;

 private:
  std::vector<double> probs_;
};

}  // namespace sat

#endif  // SAT_TENSOR_HPP
