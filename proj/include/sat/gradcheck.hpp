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

#ifndef SAT_GRADCHECK_HPP
#define SAT_GRADCHECK_HPP

#include <cstdint>
#include <functional>
#include <span>

#include "sat/graph.hpp"

namespace sat {

// Builds a scalar loss inside the given graph. Must be deterministic for
// fixed parameter values.
using LossBuilder = std::function<Var(Graph&)>;

struct GradCheckOptions {
  double epsilon = 1e-4;
  std::size_t samples = 100;  // coordinates drawn uniformly over all params
  std::uint64_t seed = 0;
};

// Compares backward() against central differences and returns
//   max |analytic - numeric| / max(1, |analytic|)
// over the sampled coordinates. Parameter gradients are left zeroed and
// values restored.
double finite_diff_check(const LossBuilder& loss_fn,
                         std::span<Parameter* const> params,
                         const GradCheckOptions& options = {});

}  // namespace sat

#endif  // SAT_GRADCHECK_HPP
