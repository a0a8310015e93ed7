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

// Command-line front end.
//
//   sat train    --config <file> [--seed N] [--criterion classifier|scorer] [--out <dir>]
//   sat baseline --kind supervised|fixmatch --config <file> [--seed N] [--out <dir>]
//   sat ablate   --kind labeled_size|aug_combo --config <file> [--seeds 0,1,2,3,4] [--out <csv>]
//   sat eval     --checkpoint <file> --data <jsonl>
//   sat synth    --out <dir> [--seed N]
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sat/ablation.hpp"
#include "sat/config.hpp"
#include "sat/error.hpp"
#include "sat/metrics.hpp"
#include "sat/model.hpp"
#include "sat/synthetic.hpp"
#include "sat/trainer.hpp"

namespace {

struct CommonRunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> criterion;
  std::vector<std::string> overrides;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonRunArgs& args) {
  cmd->add_option("--config", args.config, "key=value config file")->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--criterion", args.criterion, "classifier|scorer");
  cmd->add_option("--set", args.overrides, "extra key=value overrides");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_flag("--quiet", args.quiet, "no per-epoch log");
}

sat::TrainConfig resolve(const CommonRunArgs& args) {
  sat::TrainConfig cfg = sat::load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  if (args.criterion) cfg.criterion = sat::parse_criterion(*args.criterion);
  for (const auto& kv : args.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw sat::ConfigError("--set expects key=value, got " + kv);
    sat::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void report(const sat::RunRecord& r) {
  std::cout << "best_epoch " << r.best_epoch << "\n"
            << "test_accuracy " << r.metrics.test.accuracy << "\n"
            << "test_macro_f1 " << r.metrics.test.macro_f1 << "\n";
  if (!r.checkpoint.empty()) std::cout << "checkpoint " << r.checkpoint.string() << "\n";
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if constexpr (std::is_same_v<T, std::string>) {
      out.push_back(item);
    } else {
      try {
        out.push_back(static_cast<T>(std::stoull(item)));
      } catch (const std::exception&) {
        throw sat::ConfigError("bad list entry '" + item + "'");
      }
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Instance-adaptive self-training for semi-supervised text classification"};
  app.require_subcommand(1);

  CommonRunArgs train_args;
  std::string method = "sat";
  auto* train = app.add_subcommand("train", "train one model");
  add_common(train, train_args);
  train->add_option("--method", method, "sat|supervised|fixmatch");

  CommonRunArgs base_args;
  std::string base_kind;
  auto* baseline = app.add_subcommand("baseline", "train a comparison baseline");
  add_common(baseline, base_args);
  baseline->add_option("--kind", base_kind, "supervised|fixmatch")->required();

  CommonRunArgs abl_args;
  std::string abl_kind, seeds = "0,1,2,3,4", sizes = "3,10,20", techniques = "sr,pd,ri,bt";
  std::size_t threads = 1;
  auto* ablate = app.add_subcommand("ablate", "labeled-size or augmentation sweep");
  add_common(ablate, abl_args);
  ablate->add_option("--kind", abl_kind, "labeled_size|aug_combo")->required();
  ablate->add_option("--seeds", seeds, "comma-separated seeds");
  ablate->add_option("--sizes", sizes, "comma-separated N_c values");
  ablate->add_option("--techniques", techniques, "comma-separated techniques");
  ablate->add_option("--threads", threads, "cells run concurrently");

  std::string ckpt_path, data_path;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on labeled JSONL");
  eval->add_option("--checkpoint", ckpt_path)->required();
  eval->add_option("--data", data_path)->required();

  std::string synth_out;
  sat::SyntheticSpec spec;
  auto* synth = app.add_subcommand("synth", "write the synthetic benchmark corpus");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--seed", spec.seed);
  synth->add_option("--classes", spec.classes);
  synth->add_option("--vocab-size", spec.vocab_size);
  synth->add_option("--signal-words", spec.signal_words_per_class);
  synth->add_option("--signal-fraction", spec.signal_fraction);
  synth->add_option("--min-length", spec.min_length);
  synth->add_option("--max-length", spec.max_length);
  synth->add_option("--train-per-class", spec.train_per_class);
  synth->add_option("--dev-per-class", spec.dev_per_class);
  synth->add_option("--test-per-class", spec.test_per_class);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*train || *baseline) {
    const bool is_train = static_cast<bool>(*train);
    const CommonRunArgs& args = is_train ? train_args : base_args;
    const sat::TrainConfig cfg = resolve(args);
    const sat::Dataset data = sat::load_dataset(cfg);
    sat::RunOptions opts;
    opts.out_dir = args.out;
    opts.log = args.quiet ? nullptr : &std::cerr;
    sat::RunRecord r;
    if (is_train) {
      r = sat::run_experiment(cfg, data, sat::parse_method(method), opts);
    } else {
      sat::BaselineKind kind;
      if (base_kind == "supervised") {
        kind = sat::BaselineKind::kSupervisedOnly;
      } else if (base_kind == "fixmatch") {
        kind = sat::BaselineKind::kFixedFixMatch;
      } else {
        throw sat::ConfigError("unknown baseline '" + base_kind + "'");
      }
      r = sat::run_baseline(kind, cfg, data, opts);
    }
    report(r);
    return 0;
  }

  if (*ablate) {
    const sat::TrainConfig cfg = resolve(abl_args);
    const sat::Dataset data = sat::load_dataset(cfg);
    sat::AblationOptions opts;
    opts.seeds = parse_list<std::uint64_t>(seeds);
    opts.labeled_sizes = parse_list<std::size_t>(sizes);
    opts.techniques = parse_list<std::string>(techniques);
    opts.threads = threads;
    opts.log = abl_args.quiet ? nullptr : &std::cerr;
    const auto table = sat::run_ablation(sat::parse_ablation_kind(abl_kind), cfg, data, opts);
    if (abl_args.out.empty()) {
      sat::write_sweep_csv(std::cout, table);
    } else {
      std::ofstream out(abl_args.out);
      if (!out) throw sat::Error("cannot write " + abl_args.out);
      sat::write_sweep_csv(out, table);
    }
    return 0;
  }

  if (*eval) {
    const sat::Checkpoint ckpt = sat::load_checkpoint(ckpt_path);
    const sat::MainNetwork net = sat::network_from_checkpoint(ckpt);
    auto loaded = sat::load_jsonl(data_path, 0, ckpt.task);
    for (auto& ex : loaded.examples) {
      if (!ex.label) throw sat::DataError("line " + std::to_string(ex.id.line) + " has no label");
      ckpt.vocab.encode(ex);
    }
    const sat::Metrics m = sat::evaluate(net, loaded.examples);
    std::cout << "examples " << loaded.examples.size() << "\n"
              << "accuracy " << m.accuracy << "\n"
              << "macro_f1 " << m.macro_f1 << "\n";
    return 0;
  }

  if (*synth) {
    sat::write_synthetic(spec, synth_out);
    std::cout << "wrote synthetic corpus to " << synth_out << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sat::exit_code(e);
  }
}
