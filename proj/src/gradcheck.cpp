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

#include "sat/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sat/optim.hpp"

namespace sat {

namespace {

double evaluate(const LossBuilder& loss_fn) {
  Graph g(false);
  return loss_fn(g).item();
}

}  // namespace

double finite_diff_check(const LossBuilder& loss_fn,
                         std::span<Parameter* const> params,
                         const GradCheckOptions& options) {
  zero_grad(params);
  {
    Graph g;
    Var loss = loss_fn(g);
    g.backward(loss);
  }
  std::vector<std::pair<Parameter*, std::size_t>> coords;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) coords.emplace_back(p, i);
  }
  if (coords.empty()) return 0.0;

  std::mt19937_64 rng(options.seed);
  std::vector<std::pair<Parameter*, std::size_t>> picked;
  if (coords.size() <= options.samples) {
    picked = coords;
  } else {
    std::sample(coords.begin(), coords.end(), std::back_inserter(picked),
                options.samples, rng);
  }

  double worst = 0.0;
  for (auto [p, i] : picked) {
    const double original = p->value[i];
    p->value[i] = original + options.epsilon;
    const double up = evaluate(loss_fn);
    p->value[i] = original - options.epsilon;
    const double down = evaluate(loss_fn);
    p->value[i] = original;
    const double numeric = (up - down) / (2.0 * options.epsilon);
    const double analytic = p->grad[i];
    worst = std::max(worst, std::abs(analytic - numeric) /
                                std::max(1.0, std::abs(analytic)));
  }
  zero_grad(params);
  return worst;
}

}  // namespace sat
