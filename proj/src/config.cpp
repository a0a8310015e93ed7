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

#include "sat/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sat/augment.hpp"
#include "sat/error.hpp"

namespace sat {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError("bad value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Field {
  std::function<void(TrainConfig&, const std::string&)> set;
  std::function<std::string(const TrainConfig&)> get;
  bool is_path = false;
};

template <class T>
Field number(T TrainConfig::*member, const char* key) {
  return {[member, key](TrainConfig& c, const std::string& v) {
            c.*member = parse_number<T>(key, v);
          },
          [member](const TrainConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field text(std::string TrainConfig::*member, bool is_path = false) {
  return {[member](TrainConfig& c, const std::string& v) { c.*member = v; },
          [member](const TrainConfig& c) { return c.*member; }, is_path};
}

// Ordered: format_config emits keys in this order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"batch_size", number(&TrainConfig::batch_size, "batch_size")},
      {"mu", number(&TrainConfig::mu, "mu")},
      {"lambda_u", number(&TrainConfig::lambda_u, "lambda_u")},
      {"tau", number(&TrainConfig::tau, "tau")},
      {"beta", number(&TrainConfig::beta, "beta")},
      {"eta", number(&TrainConfig::eta, "eta")},
      {"optimizer", text(&TrainConfig::optimizer)},
      {"epochs", number(&TrainConfig::epochs, "epochs")},
      {"patience", number(&TrainConfig::patience, "patience")},
      {"seed", number(&TrainConfig::seed, "seed")},
      {"criterion",
       {[](TrainConfig& c, const std::string& v) { c.criterion = parse_criterion(v); },
        [](const TrainConfig& c) { return to_string(c.criterion); }}},
      {"classifier_similarity",
       {[](TrainConfig& c, const std::string& v) {
          c.classifier_similarity = parse_classifier_similarity(v);
        },
        [](const TrainConfig& c) { return to_string(c.classifier_similarity); }}},
      {"d_proj", number(&TrainConfig::d_proj, "d_proj")},
      {"temperature", number(&TrainConfig::temperature, "temperature")},
      {"aug1", text(&TrainConfig::aug1)},
      {"aug2", text(&TrainConfig::aug2)},
      {"sr_rate", number(&TrainConfig::sr_rate, "sr_rate")},
      {"pd_prob", number(&TrainConfig::pd_prob, "pd_prob")},
      {"ri_rate", number(&TrainConfig::ri_rate, "ri_rate")},
      {"d_emb", number(&TrainConfig::d_emb, "d_emb")},
      {"d_hid", number(&TrainConfig::d_hid, "d_hid")},
      {"n_c", number(&TrainConfig::n_c, "n_c")},
      {"unlabeled_per_class", number(&TrainConfig::unlabeled_per_class, "unlabeled_per_class")},
      {"dev_per_class", number(&TrainConfig::dev_per_class, "dev_per_class")},
      {"test_per_class", number(&TrainConfig::test_per_class, "test_per_class")},
      {"train_file", text(&TrainConfig::train_file, true)},
      {"unlabeled_file", text(&TrainConfig::unlabeled_file, true)},
      {"dev_file", text(&TrainConfig::dev_file, true)},
      {"test_file", text(&TrainConfig::test_file, true)},
      {"lexicon_file", text(&TrainConfig::lexicon_file, true)},
      {"bt_forward_file", text(&TrainConfig::bt_forward_file, true)},
      {"bt_backward_file", text(&TrainConfig::bt_backward_file, true)},
  };
  return table;
}

const Field& find_field(const std::string& key) {
  for (const auto& [k, f] : fields()) {
    if (k == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(tau > 0.0 && tau <= 1.0, "tau must lie in (0,1]");
  require(lambda_u >= 0.0, "lambda_u must be non-negative");
  require(beta > 0.0, "beta must be positive");
  require(eta > 0.0, "eta must be positive");
  require(mu >= 1 && batch_size >= 1 && n_c >= 1, "mu, batch_size and n_c must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(d_emb >= 1 && d_hid >= 1 && d_proj >= 1, "model dimensions must be positive");
  require(temperature > 0.0, "temperature must be positive");
  require(optimizer == "sgd" || optimizer == "adam", "optimizer must be sgd or adam");
  const AugmentKind k1 = parse_augment_kind(aug1);
  const AugmentKind k2 = parse_augment_kind(aug2);
  require(k1 != k2, "aug1 and aug2 must be different techniques");
  if (criterion == CriterionKind::kScorer) {
    require(batch_size >= 2, "the scorer criterion needs batch_size >= 2 for in-batch negatives");
  }
}

void set_config_value(TrainConfig& cfg, const std::string& key, const std::string& value) {
  find_field(key).set(cfg, value);
}

TrainConfig parse_config(std::istream& in, const std::filesystem::path& base_dir,
                         const std::string& name) {
  TrainConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      const Field& f = find_field(key);
      if (f.is_path && !value.empty() && !base_dir.empty() &&
          std::filesystem::path(value).is_relative()) {
        value = (base_dir / value).lexically_normal().string();
      }
      f.set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, path.parent_path(), path.string());
}

std::string format_config(const TrainConfig& cfg) {
  std::ostringstream os;
  for (const auto& [k, f] : fields()) os << k << " = " << f.get(cfg) << '\n';
  return os.str();
}

}  // namespace sat
