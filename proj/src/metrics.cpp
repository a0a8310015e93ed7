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

#include "sat/metrics.hpp"

#include <cmath>

#include "sat/error.hpp"

namespace sat {

Metrics compute_metrics(std::span<const std::size_t> truth,
                        std::span<const std::size_t> predicted, std::size_t classes) {
  if (truth.empty()) throw UsageError("cannot evaluate an empty set");
  if (truth.size() != predicted.size()) throw UsageError("truth/prediction length mismatch");
  std::vector<double> tp(classes, 0.0), fp(classes, 0.0), fn(classes, 0.0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t t = truth[i], p = predicted[i];
    if (t >= classes || p >= classes) throw DataError("class index out of range");
    if (t == p) {
      ++correct;
      tp[t] += 1.0;
    } else {
      fp[p] += 1.0;
      fn[t] += 1.0;
    }
  }
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    const double precision = tp[c] + fp[c] > 0.0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
    const double recall = tp[c] + fn[c] > 0.0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
    if (precision + recall > 0.0) f1_sum += 2.0 * precision * recall / (precision + recall);
  }
  return {static_cast<double>(correct) / static_cast<double>(truth.size()),
          f1_sum / static_cast<double>(classes)};
}

Metrics evaluate(const MainNetwork& main, std::span<const Example> examples) {
  if (examples.empty()) throw UsageError("cannot evaluate an empty set");
  std::vector<std::size_t> truth, predicted;
  truth.reserve(examples.size());
  predicted.reserve(examples.size());
  for (const Example& ex : examples) {
    if (!ex.label) throw UsageError("evaluation example without a label");
    truth.push_back(*ex.label);
    predicted.push_back(main.predict_proba(ex.tokens).argmax());
  }
  return compute_metrics(truth, predicted, main.classes());
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace sat
