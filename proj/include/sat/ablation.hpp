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

#ifndef SAT_ABLATION_HPP
#define SAT_ABLATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sat/metrics.hpp"
#include "sat/trainer.hpp"

namespace sat {

// One (setting, seed) cell of a sweep.
struct SweepCell {
  std::string setting;
  TrainConfig config;
  Method method = Method::kSat;
};

struct SweepRow {
  std::string setting;
  std::uint64_t seed = 0;
  Method method = Method::kSat;
  double test_accuracy = 0.0;
  double test_macro_f1 = 0.0;
  std::size_t best_epoch = 0;
};

struct SweepAggregate {
  std::string setting;
  std::size_t runs = 0;
  MeanStd accuracy;
  MeanStd macro_f1;
};

struct SweepTable {
  std::vector<SweepRow> rows;             // one per cell, in cell order
  std::vector<SweepAggregate> aggregates;  // one per setting, first-seen order
};

// Runs independent cells, `threads` at a time. Cells share only the
// read-only dataset; row order follows cell order regardless of threads.
SweepTable run_sweep(const std::vector<SweepCell>& cells, const Dataset& data,
                     std::size_t threads = 1, std::ostream* log = nullptr);

SweepTable aggregate(std::vector<SweepRow> rows);

enum class AblationKind { kLabeledSize, kAugCombo };
AblationKind parse_ablation_kind(const std::string& name);  // labeled_size|aug_combo

struct AblationOptions {
  std::vector<std::size_t> labeled_sizes{3, 10, 20};
  std::vector<std::string> techniques{"sr", "pd", "ri", "bt"};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  Method method = Method::kSat;
  std::size_t threads = 1;
  std::ostream* log = nullptr;
};

// All unordered pairs of distinct techniques, in lexicographic index order.
std::vector<std::pair<std::string, std::string>> unordered_pairs(
    const std::vector<std::string>& techniques);

std::vector<SweepCell> ablation_cells(AblationKind kind, const TrainConfig& base,
                                      const AblationOptions& options);
SweepTable run_ablation(AblationKind kind, const TrainConfig& base, const Dataset& data,
                        const AblationOptions& options = {});

// `setting,seed,test_accuracy,test_macro_f1`; after the per-run rows, two
// rows per setting with seed = "mean" and seed = "std".
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace sat

#endif  // SAT_ABLATION_HPP
