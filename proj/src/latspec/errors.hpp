// Copyright (c) 2026 The latspec authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace latspec {

/// Stable error categories, mirrored one-to-one by the C API status codes.
enum class errc : int {
  ok = 0,
  invalid_argument = 1,   ///< bad parameter or schema violation
  resolution = 2,          ///< frequency grid too coarse for the requested energy
  budget = 3,              ///< memory or node-count budget exceeded
  convergence = 4,         ///< iterative solver stagnated
  domain = 5,              ///< input outside the mathematical domain of the operation
  io = 6,                  ///< filesystem failure while writing artifacts
};

/// Exception carrying a stable category plus a human-readable message.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Raised by kernel quadrature when the grid violates the resolution rule.
/// Carries the minimal admissible per-axis point count.
class resolution_error : public error {
 public:
  resolution_error(const std::string& what, long min_n)
      : error(errc::resolution, what), min_n_(min_n) {}
  long min_n() const noexcept { return min_n_; }

 private:
  long min_n_;
};

/// Raised by iterative norm solvers on stagnation; carries the last two iterates.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, double last, double prev)
      : error(errc::convergence, what), last_(last), prev_(prev) {}
  double last_iterate() const noexcept { return last_; }
  double previous_iterate() const noexcept { return prev_; }

 private:
  double last_;
  double prev_;
};

}  // namespace latspec
