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

#ifndef SAT_ERROR_HPP
#define SAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sat {

// Base of every error raised by the library. The CLI maps the concrete
// subclass onto a process exit code (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad shapes, bad hyperparameters, unknown config keys. Exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input files, unknown labels, insufficient class population,
// out-of-range class indices. Exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Zero-norm vectors, all-PAD token lists, empty tokenizations.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A translation provider (or another augmentation backend) failed.
class AugmentationError : public Error {
 public:
  using Error::Error;
};

// API misuse: backward on a non-scalar, unlabeled example in a labeled batch.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A forward operation produced NaN or Inf.
class NumericError : public Error {
 public:
  using Error::Error;
};

// 0 success, 1 configuration error, 2 data error, 3 runtime error.
int exit_code(const std::exception& e);

}  // namespace sat

#endif  // SAT_ERROR_HPP
