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

#include <string>
#include <vector>

#include "gridop.hpp"
#include "potential.hpp"

namespace latspec {

struct BsOptions {
  long box_radius = 40;  ///< truncation radius for infinite-support V
  long embed_n = 0;      ///< embedding lattice override (0 = auto)
  long grid_n = 0;       ///< kernel quadrature override for the dense path
  double rel_tol = 1e-8;
  long max_iter = 400;
};

struct BsNormResult {
  double value = 0.0;       ///< largest singular value of |V|^{1/2} R0(z) |V|^{1/2}
  double tail_bound = 0.0;  ///< box-truncation tail estimate (0 = exact support)
};

/// Operator norm of the sandwiched resolvent at one spectral point.
/// Finite-support V: exact dense matrix over the support sites, kernel
/// values per the pointwise resolution rule. Decaying V: box truncation at
/// opts.box_radius via the matrix-free multiplier operator, with the tail
/// reported. `warm` carries the Lanczos start vector between nearby z
/// (matrix-free path only).
BsNormResult bs_norm(const Potential& v, int d, cplx z, const BsOptions& opts,
                     std::vector<cplx>* warm = nullptr);

struct SweepOptions {
  long box_radius = 40;
  long embed_n = 0;
  std::vector<double> mu_grid;     ///< empty = default_mu_grid(d)
  std::vector<double> eps_ladder;  ///< empty = default_eps_ladder()
  double rel_tol = 1e-6;
  long max_iter = 600;
};

struct SweepPoint {
  double mu = 0.0;
  double eps = 0.0;
  double norm = 0.0;
};

/// Per-mu diagnostics: log-log slope of norm vs eps, fit residual, and the
/// max/min norm ratio across the ladder.
struct MuFit {
  double mu = 0.0;
  double slope = 0.0;
  double residual = 0.0;
  double ratio = 1.0;
};

struct SweepReport {
  int d = 0;
  long box_radius = 0;
  std::string potential;
  std::vector<double> mu_grid;
  std::vector<double> eps_ladder;
  std::vector<SweepPoint> points;  ///< mu-major, eps descending
  std::vector<MuFit> fits;
  double sup_norm = 0.0;
  double tail_bound = 0.0;
  std::string verdict;  ///< bounded | divergent | inconclusive
};

/// Integers of [-1, 4d+1] plus half-step refinement around each threshold
/// energy 4k, where all blow-up concentrates.
std::vector<double> default_mu_grid(int d);

/// Geometric ladder {10^-1, 10^-1.5, ..., 10^-3}.
std::vector<double> default_eps_ladder();

/// Sweep z = mu + i*eps over the grid and classify:
///   divergent     some mu has fitted eps-slope < -0.2 with residual < 0.1
///   bounded       every mu has max/min norm ratio <= 2 across the ladder
///   inconclusive  otherwise
/// The slope/ratio thresholds are conventions of this engine, not theorems.
SweepReport bs_sup_sweep(const Potential& v, int d, const SweepOptions& opts);

/// lambda* = 1 / sup-norm: for |lambda| < lambda* the coupled operator has
/// no bound state, since lambda * K can never reach eigenvalue 1.
/// Throws errc::domain unless the sweep verdict is "bounded".
double weak_coupling_margin(const SweepReport& report);

/// Bound-state energy of H0 + lambda*V for attractive finite-support V:
/// the root of lambda * ||K_E|| = 1 on (e_lo, e_hi) below the spectrum,
/// located by bisection (the norm is monotone in E there).
double bs_bound_state_energy(const Potential& v, int d, double lambda, double e_lo, double e_hi,
                             double tol = 1e-10);

}  // namespace latspec
