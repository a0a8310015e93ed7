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

#include "sat/ablation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "sat/error.hpp"

namespace sat {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

SweepTable run_sweep(const std::vector<SweepCell>& cells, const Dataset& data,
                     std::size_t threads, std::ostream* log) {
  std::vector<SweepRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const SweepCell& cell = cells[i];
      try {
        const RunRecord r = run_experiment(cell.config, data, cell.method);
        rows[i] = {cell.setting, cell.config.seed, cell.method, r.metrics.test.accuracy,
                   r.metrics.test.macro_f1, r.best_epoch};
        if (log != nullptr) {
          std::lock_guard lock(log_mutex);
          *log << cell.setting << " seed " << cell.config.seed << " " << to_string(cell.method)
               << " test_acc " << fmt(r.metrics.test.accuracy) << " test_f1 "
               << fmt(r.metrics.test.macro_f1) << " (" << fmt(r.wall_seconds) << " s)\n";
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(threads, cells.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return aggregate(std::move(rows));
}

SweepTable aggregate(std::vector<SweepRow> rows) {
  SweepTable table;
  table.rows = std::move(rows);
  std::vector<std::string> order;
  for (const auto& r : table.rows) {
    if (std::find(order.begin(), order.end(), r.setting) == order.end()) order.push_back(r.setting);
  }
  for (const auto& setting : order) {
    std::vector<double> acc, f1;
    for (const auto& r : table.rows) {
      if (r.setting != setting) continue;
      acc.push_back(r.test_accuracy);
      f1.push_back(r.test_macro_f1);
    }
    table.aggregates.push_back({setting, acc.size(), mean_std(acc), mean_std(f1)});
  }
  return table;
}

AblationKind parse_ablation_kind(const std::string& name) {
  if (name == "labeled_size") return AblationKind::kLabeledSize;
  if (name == "aug_combo") return AblationKind::kAugCombo;
  throw ConfigError("unknown ablation '" + name + "' (expected labeled_size|aug_combo)");
}

std::vector<std::pair<std::string, std::string>> unordered_pairs(
    const std::vector<std::string>& techniques) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < techniques.size(); ++i) {
    for (std::size_t j = i + 1; j < techniques.size(); ++j) {
      out.emplace_back(techniques[i], techniques[j]);
    }
  }
  return out;
}

std::vector<SweepCell> ablation_cells(AblationKind kind, const TrainConfig& base,
                                      const AblationOptions& options) {
  std::vector<SweepCell> cells;
  if (kind == AblationKind::kLabeledSize) {
    for (std::size_t n_c : options.labeled_sizes) {
      for (std::uint64_t seed : options.seeds) {
        TrainConfig c = base;
        c.n_c = n_c;
        c.seed = seed;
        cells.push_back({"n_c=" + std::to_string(n_c), c, options.method});
      }
    }
  } else {
    for (const auto& [a, b] : unordered_pairs(options.techniques)) {
      for (std::uint64_t seed : options.seeds) {
        TrainConfig c = base;
        c.aug1 = a;
        c.aug2 = b;
        c.seed = seed;
        cells.push_back({a + "+" + b, c, options.method});
      }
    }
  }
  for (const auto& cell : cells) cell.config.validate();
  return cells;
}

SweepTable run_ablation(AblationKind kind, const TrainConfig& base, const Dataset& data,
                        const AblationOptions& options) {
  return run_sweep(ablation_cells(kind, base, options), data, options.threads, options.log);
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "setting,seed,test_accuracy,test_macro_f1\n";
  for (const auto& r : table.rows) {
    out << r.setting << ',' << r.seed << ',' << fmt(r.test_accuracy) << ','
        << fmt(r.test_macro_f1) << '\n';
  }
  for (const auto& a : table.aggregates) {
    out << a.setting << ",mean," << fmt(a.accuracy.mean) << ',' << fmt(a.macro_f1.mean) << '\n';
    out << a.setting << ",std," << fmt(a.accuracy.stddev) << ',' << fmt(a.macro_f1.stddev)
        << '\n';
  }
}

}  // namespace sat
