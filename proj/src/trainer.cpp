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

#include "sat/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

#include "sat/error.hpp"

namespace sat {

namespace {

Augmenter make_augmenter(const std::string& name, const TrainConfig& cfg, const Dataset& data) {
  switch (parse_augment_kind(name)) {
    case AugmentKind::kIdentity: return Augmenter::identity();
    case AugmentKind::kSynonymReplacement:
      if (!data.lexicon) throw ConfigError("sr needs lexicon_file");
      return Augmenter::synonym_replacement(data.lexicon, cfg.sr_rate);
    case AugmentKind::kPervasiveDropout: return Augmenter::pervasive_dropout(cfg.pd_prob);
    case AugmentKind::kRandomInsertion:
      if (!data.lexicon) throw ConfigError("ri needs lexicon_file");
      return Augmenter::random_insertion(data.lexicon, cfg.ri_rate);
    case AugmentKind::kBackTranslation:
      if (!data.translator) throw ConfigError("bt needs bt_forward_file and bt_backward_file");
      return Augmenter::back_translation(data.translator);
  }
  throw ConfigError("unknown augmentation " + name);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

// --- data ------------------------------------------------------------------------

Dataset load_dataset(const TrainConfig& cfg) {
  if (cfg.train_file.empty()) throw ConfigError("train_file is required");
  if (cfg.dev_file.empty()) throw ConfigError("dev_file is required");
  if (cfg.test_file.empty()) throw ConfigError("test_file is required");
  Dataset data;
  LoadedData train = load_jsonl(cfg.train_file, 0);
  train.task.validate();
  data.task = train.task;
  data.pool = std::move(train.examples);
  if (!cfg.unlabeled_file.empty()) {
    data.extra_unlabeled = load_jsonl(cfg.unlabeled_file, 1).examples;
  }
  data.dev = load_jsonl(cfg.dev_file, 2, data.task).examples;
  data.test = load_jsonl(cfg.test_file, 3, data.task).examples;
  for (const auto* part : {&data.dev, &data.test}) {
    for (const auto& ex : *part) {
      if (!ex.label) {
        throw DataError("dev/test example at line " + std::to_string(ex.id.line) +
                        " has no label");
      }
    }
  }
  if (!cfg.lexicon_file.empty()) {
    data.lexicon = std::make_shared<SynonymLexicon>(SynonymLexicon::load_tsv(cfg.lexicon_file));
  }
  if (!cfg.bt_forward_file.empty() || !cfg.bt_backward_file.empty()) {
    if (cfg.bt_forward_file.empty() || cfg.bt_backward_file.empty()) {
      throw ConfigError("bt needs both bt_forward_file and bt_backward_file");
    }
    data.translator = std::make_shared<DictionaryTranslationProvider>(
        DictionaryTranslationProvider::load(cfg.bt_forward_file, cfg.bt_backward_file));
  }
  return data;
}

SeedPlan::SeedPlan(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x5a7u};
  std::uint32_t out[10];
  seq.generate(out, out + 10);
  auto join = [&](int i) { return (std::uint64_t{out[2 * i]} << 32) | out[2 * i + 1]; };
  split = join(0);
  batches = join(1);
  main_init = join(2);
  choice_init = join(3);
  augment = join(4);
}

PreparedData prepare_data(const Dataset& data, const TrainConfig& cfg) {
  PreparedData p;
  p.task = data.task;
  SplitSizes sizes{cfg.n_c, cfg.unlabeled_per_class, cfg.dev_per_class, cfg.test_per_class};
  p.split = make_split(data.pool, data.extra_unlabeled, data.dev, data.test,
                       data.task.classes(), sizes, SeedPlan(cfg.seed).split);
  std::vector<std::string> extra;
  if (data.lexicon) extra = data.lexicon->all_tokens();
  if (data.translator) {
    auto bt = data.translator->all_tokens();
    extra.insert(extra.end(), bt.begin(), bt.end());
  }
  p.vocab = build_vocab(p.split, extra);
  encode_all(p.vocab, p.split);
  return p;
}

AugmenterPair make_augmenters(const TrainConfig& cfg, const Dataset& data) {
  return {make_augmenter(cfg.aug1, cfg, data), make_augmenter(cfg.aug2, cfg, data)};
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kSat: return "sat";
    case Method::kSupervised: return "supervised";
    case Method::kFixMatch: return "fixmatch";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "sat") return Method::kSat;
  if (name == "supervised") return Method::kSupervised;
  if (name == "fixmatch") return Method::kFixMatch;
  throw ConfigError("unknown method '" + name + "' (expected sat|supervised|fixmatch)");
}

// --- losses -------------------------------------------------------------------------

UnsupervisedLoss unsupervised_loss(Graph& g, std::span<const ProbabilityVector> weak,
                                   std::span<const Var> strong, double tau) {
  if (weak.empty()) throw UsageError("unsupervised loss of an empty batch");
  if (weak.size() != strong.size()) throw UsageError("weak/strong batch size mismatch");
  std::vector<Var> terms;
  for (std::size_t b = 0; b < weak.size(); ++b) {
    if (!strong[b].valid()) continue;
    if (weak[b].max() > tau) terms.push_back(cross_entropy(weak[b].argmax(), strong[b]));
  }
  const double n = static_cast<double>(weak.size());
  UnsupervisedLoss out;
  out.coverage = static_cast<double>(terms.size()) / n;
  Var total = terms.empty() ? g.constant(Tensor::scalar(0.0)) : sum(terms);
  out.loss = scale(total, 1.0 / n);
  return out;
}

UnsupervisedLoss unsupervised_loss(Graph& g, std::span<const UnlabeledViews> batch,
                                   std::span<const StrengthRanking> rankings,
                                   MainNetwork& main, double tau) {
  if (batch.size() != rankings.size()) throw UsageError("one ranking per item is required");
  std::vector<ProbabilityVector> weak;
  std::vector<Var> strong(batch.size());
  weak.reserve(batch.size());
  const std::size_t c = main.classes();
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const UnlabeledViews& item = batch[b];
    if (!item.ok) {
      weak.emplace_back(std::vector<double>(c, 1.0 / static_cast<double>(c)));
      continue;
    }
    const bool first_weak = rankings[b].weak_index == 1;
    const Example& w = first_weak ? item.view1 : item.view2;
    const Example& s = first_weak ? item.view2 : item.view1;
    const MainNetwork& frozen = main;
    weak.push_back(frozen.predict_proba(w.tokens));
    // Items below the threshold contribute nothing, so their strong view
    // is never evaluated.
    if (weak.back().max() > tau) strong[b] = main.predict_proba(g, s.tokens);
  }
  return unsupervised_loss(g, weak, strong, tau);
}

Var total_loss(Var l_s, Var l_u, double lambda_u) { return add(l_s, scale(l_u, lambda_u)); }

double total_loss(double l_s, double l_u, double lambda_u) { return l_s + lambda_u * l_u; }

// --- Trainer -------------------------------------------------------------------------

Trainer::Trainer(const TrainConfig& cfg, Method method, const PreparedData& data,
                 AugmenterPair augmenters)
    : cfg_(cfg),
      method_(method),
      data_(&data),
      aug_(std::move(augmenters)),
      aug_rng_(SeedPlan(cfg.seed).augment) {
  cfg_.validate();
  const SeedPlan seeds(cfg.seed);
  const ModelDims dims{cfg.d_emb, cfg.d_hid};
  main_ = MainNetwork(data.vocab.size(), data.task.classes(), dims, seeds.main_init);
  main_opt_ = make_optimizer(cfg.optimizer, cfg.eta);
  if (method == Method::kSat) {
    ChoiceConfig cc{cfg.criterion, cfg.classifier_similarity, dims, cfg.d_proj, cfg.temperature};
    choice_.emplace(data.vocab.size(), cc, seeds.choice_init);
    choice_opt_ = make_optimizer(cfg.optimizer, cfg.beta);
  }
}

StepReport Trainer::train_step(const Batch& batch) {
  StepReport report;
  auto main_params = main_.parameters();
  Graph g;
  Var l_s = main_.supervised_loss(g, batch.labeled);
  report.loss_s = l_s.item();
  Var l_total = l_s;

  if (method_ != Method::kSupervised) {
    if (method_ == Method::kSat) {
      std::vector<std::pair<Example, Example>> views;
      views.reserve(batch.labeled.size());
      std::vector<ChoiceItem> items;
      for (const Example* x : batch.labeled) {
        try {
          views.push_back(apply_pair(*x, aug_.first, aug_.second, data_->vocab, aug_rng_));
        } catch (const AugmentationError&) {
          ++report.skipped;
          continue;
        }
        const auto& [v1, v2] = views.back();
        const double i1 = criterion_score(cfg_.criterion, *x, v1, *x->label, main_, *choice_);
        const double i2 = criterion_score(cfg_.criterion, *x, v2, *x->label, main_, *choice_);
        items.push_back({x, &v1, &v2, rank_descending(i1, i2).weak_index});
      }
      const std::size_t needed = cfg_.criterion == CriterionKind::kScorer ? 2 : 1;
      if (items.size() >= needed) {
        report.loss_aug_choice = update_choice_network(*choice_, items, *choice_opt_);
      }
    }

    std::vector<UnlabeledViews> unlabeled(batch.unlabeled.size());
    std::vector<StrengthRanking> rankings(batch.unlabeled.size());
    for (std::size_t b = 0; b < batch.unlabeled.size(); ++b) {
      UnlabeledViews& u = unlabeled[b];
      u.original = batch.unlabeled[b];
      try {
        std::tie(u.view1, u.view2) =
            apply_pair(*u.original, aug_.first, aug_.second, data_->vocab, aug_rng_);
        u.ok = true;
      } catch (const AugmentationError&) {
        ++report.skipped;
        continue;
      }
      if (method_ == Method::kSat) rankings[b] = infer_choice(*u.original, u.view1, u.view2, *choice_);
    }
    UnsupervisedLoss lu = unsupervised_loss(g, unlabeled, rankings, main_, cfg_.tau);
    report.loss_u = lu.loss.item();
    report.coverage = lu.coverage;
    l_total = total_loss(l_s, lu.loss, cfg_.lambda_u);
  }

  report.loss_total = l_total.item();
  zero_grad(main_params);
  g.backward(l_total);
  main_opt_->step(main_params);
  return report;
}

// --- experiments ---------------------------------------------------------------------

RunRecord run_experiment(const TrainConfig& cfg, const Dataset& data, Method method,
                         const RunOptions& options) {
  cfg.validate();
  const PreparedData prepared = prepare_data(data, cfg);
  return run_experiment(cfg, data, prepared, method, options);
}

RunRecord run_experiment(const TrainConfig& cfg, const Dataset& data,
                         const PreparedData& prepared, Method method,
                         const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  RunRecord record;
  record.config = cfg;
  record.method = method;

  AugmenterPair augmenters = method == Method::kSupervised
                                 ? AugmenterPair{Augmenter::identity(), Augmenter::identity()}
                                 : make_augmenters(cfg, data);
  Trainer trainer(cfg, method, prepared, std::move(augmenters));
  BatchStream stream(prepared.split, cfg.batch_size, cfg.mu, SeedPlan(cfg.seed).batches);

  double best_accuracy = -1.0;
  std::vector<Tensor> best = trainer.main().snapshot();
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochMetrics em;
    em.epoch = epoch;
    const auto batches = stream.next_epoch();
    for (const Batch& batch : batches) {
      const StepReport r = trainer.train_step(batch);
      em.loss_s += r.loss_s;
      em.loss_u += r.loss_u;
      em.loss_aug_choice += r.loss_aug_choice;
      em.coverage += r.coverage;
    }
    const double steps = static_cast<double>(batches.size());
    em.loss_s /= steps;
    em.loss_u /= steps;
    em.loss_aug_choice /= steps;
    em.coverage /= steps;
    em.dev = evaluate(trainer.main(), prepared.split.dev);
    record.metrics.epochs.push_back(em);
    if (em.dev.accuracy > best_accuracy) {
      best_accuracy = em.dev.accuracy;
      record.best_epoch = epoch;
      best = trainer.main().snapshot();
    }
    if (options.log != nullptr) {
      *options.log << to_string(method) << " epoch " << epoch << " dev_acc "
                   << fmt(em.dev.accuracy) << " dev_f1 " << fmt(em.dev.macro_f1) << " l_s "
                   << fmt(em.loss_s) << " l_u " << fmt(em.loss_u) << " l_aug "
                   << fmt(em.loss_aug_choice) << " coverage " << fmt(em.coverage) << '\n';
    }
    if (cfg.patience > 0 && epoch - record.best_epoch >= cfg.patience) break;
  }
  trainer.main().restore(best);
  record.metrics.test = evaluate(trainer.main(), prepared.split.test);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    record.checkpoint = options.out_dir / "best.ckpt";
    save_checkpoint(record.checkpoint,
                    make_checkpoint(trainer.main(), prepared.task, prepared.vocab));
    std::ofstream(options.out_dir / "config.txt") << format_config(cfg);
    std::ofstream csv(options.out_dir / "metrics.csv");
    write_metrics_csv(csv, record);
  }
  return record;
}

RunRecord run_baseline(BaselineKind kind, const TrainConfig& cfg, const Dataset& data,
                       const RunOptions& options) {
  if (kind == BaselineKind::kSupervisedOnly) {
    TrainConfig c = cfg;
    c.lambda_u = 0.0;
    return run_experiment(c, data, Method::kSupervised, options);
  }
  return run_experiment(cfg, data, Method::kFixMatch, options);
}

void write_metrics_csv(std::ostream& out, const RunRecord& record) {
  out << "epoch,split,accuracy,macro_f1,loss_s,loss_u,loss_aug_choice,coverage\n";
  for (const EpochMetrics& e : record.metrics.epochs) {
    out << e.epoch << ",dev," << fmt(e.dev.accuracy) << ',' << fmt(e.dev.macro_f1) << ','
        << fmt(e.loss_s) << ',' << fmt(e.loss_u) << ',' << fmt(e.loss_aug_choice) << ','
        << fmt(e.coverage) << '\n';
  }
  out << record.best_epoch << ",test," << fmt(record.metrics.test.accuracy) << ','
      << fmt(record.metrics.test.macro_f1) << ",,,,\n";
}

}  // namespace sat
