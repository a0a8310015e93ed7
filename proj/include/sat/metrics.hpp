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

#ifndef SAT_METRICS_HPP
#define SAT_METRICS_HPP

#include <span>
#include <vector>

#include "sat/corpus.hpp"
#include "sat/model.hpp"

namespace sat {

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

// Accuracy and the unweighted mean of per-class F1 over all `classes`
// classes. A class with P + R = 0 (never predicted and never true, or never
// correct) scores F1 = 0.
Metrics compute_metrics(std::span<const std::size_t> truth,
                        std::span<const std::size_t> predicted, std::size_t classes);

Metrics evaluate(const MainNetwork& main, std::span<const Example> examples);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1); 0 for n < 2
};

MeanStd mean_std(std::span<const double> values);

}  // namespace sat

#endif  // SAT_METRICS_HPP
