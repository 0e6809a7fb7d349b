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

#include <complex>
#include <vector>

#include "grid.hpp"

namespace latspec {

/// Abstract linear map on C^n used by the iterative norm solver.
class LinOp {
 public:
  virtual ~LinOp() = default;
  virtual long dim() const = 0;
  virtual void apply(const cplx* in, cplx* out) const = 0;
  virtual void apply_adjoint(const cplx* in, cplx* out) const = 0;
};

struct NormOptions {
  double rel_tol = 1e-8;
  long max_iter = 400;
  const std::vector<cplx>* warm_start = nullptr;
};

/// Largest singular value via a three-term Lanczos recursion on A*A.
/// Deterministic start vector; stops when the top Ritz value is stable to
/// rel_tol over three consecutive steps. Throws convergence_error carrying
/// the last two iterates on stagnation.
double top_singular_value(const LinOp& op, const NormOptions& opts = {});

/// Same, also returning the final Lanczos vector (a cheap warm start for a
/// nearby operator, not the converged singular vector).
double top_singular_value(const LinOp& op, const NormOptions& opts, std::vector<cplx>* last_vec);

}  // namespace latspec
