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

#include "sat/optim.hpp"

#include <cmath>

#include "sat/error.hpp"

namespace sat {

void zero_grad(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

void sgd_step(std::span<Parameter* const> params, double rate) {
  if (rate == 0.0) return;
  for (Parameter* p : params) {
    auto v = p->value.values();
    auto g = p->grad.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= rate * g[i];
  }
}

Sgd::Sgd(double rate) : rate_(rate) {
  if (!(rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
}

void Sgd::step(std::span<Parameter* const> params) { sgd_step(params, rate_); }

Adam::Adam(double rate, double beta1, double beta2, double eps)
    : rate_(rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (!(rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
}

void Adam::step(std::span<Parameter* const> params) {
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  for (Parameter* p : params) {
    if (p->moment1.shape() != p->value.shape()) {
      p->moment1 = Tensor::zeros(p->value.shape());
      p->moment2 = Tensor::zeros(p->value.shape());
    }
    auto v = p->value.values();
    auto g = p->grad.values();
    auto m = p->moment1.values();
    auto s = p->moment2.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      s[i] = beta2_ * s[i] + (1.0 - beta2_) * g[i] * g[i];
      v[i] -= rate_ * (m[i] / c1) / (std::sqrt(s[i] / c2) + eps_);
    }
  }
}

std::unique_ptr<Optimizer> make_optimizer(const std::string& kind, double rate) {
  if (kind == "sgd") return std::make_unique<Sgd>(rate);
  if (kind == "adam") return std::make_unique<Adam>(rate);
  throw ConfigError("unknown optimizer '" + kind + "' (expected sgd|adam)");
}

}  // namespace sat
