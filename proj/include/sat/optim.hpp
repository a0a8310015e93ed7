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

#ifndef SAT_OPTIM_HPP
#define SAT_OPTIM_HPP

#include <memory>
#include <span>
#include <string>

#include "sat/tensor.hpp"

namespace sat {

void zero_grad(std::span<Parameter* const> params);

// value <- value - rate * grad. Gradients are left untouched.
void sgd_step(std::span<Parameter* const> params, double rate);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(std::span<Parameter* const> params) = 0;
  virtual double rate() const = 0;
};

class Sgd final : public Optimizer {
 public:
  explicit Sgd(double rate);
  void step(std::span<Parameter* const> params) override;
  double rate() const override { return rate_; }

 private:
  double rate_;
};

// Adam with bias correction; moments live in Parameter::moment1/moment2.
class Adam final : public Optimizer {
 public:
  explicit Adam(double rate, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);
  void step(std::span<Parameter* const> params) override;
  double rate() const override { return rate_; }

 private:
  double rate_, beta1_, beta2_, eps_;
  long steps_ = 0;
};

// "sgd" or "adam".
std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, double rate);

}  // namespace sat

#endif  // SAT_OPTIM_HPP
