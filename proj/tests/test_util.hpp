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

// Small fixtures shared by the unit tests.

#ifndef SAT_TESTS_TEST_UTIL_HPP
#define SAT_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sat/corpus.hpp"
#include "sat/tensor.hpp"

namespace sat::testing {

inline Example make_example(std::vector<int> tokens, std::optional<std::size_t> label = {},
                            std::uint32_t line = 1) {
  Example ex;
  ex.id = {0, line};
  ex.tokens = std::move(tokens);
  for (int t : ex.tokens) ex.words.push_back("t" + std::to_string(t));
  for (std::size_t i = 0; i < ex.words.size(); ++i) ex.text += (i ? " " : "") + ex.words[i];
  ex.label = label;
  return ex;
}

inline Example make_text_example(const std::string& text, std::optional<std::size_t> label = {},
                                 std::uint32_t line = 1) {
  Example ex;
  ex.id = {0, line};
  ex.text = text;
  ex.words = tokenize(text);
  ex.label = label;
  return ex;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Oracle: -sum q ln p with the usual 0 ln 0 = 0 convention.
inline double oracle_cross_entropy(const std::vector<double>& q, const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] != 0.0) s -= q[i] * std::log(p[i]);
  }
  return s;
}

inline std::vector<double> oracle_softmax(const std::vector<double>& z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  std::vector<double> e(z.size());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += e[i] = std::exp(z[i] - m);
  for (auto& v : e) v /= s;
  return e;
}

}  // namespace sat::testing

#endif  // SAT_TESTS_TEST_UTIL_HPP
