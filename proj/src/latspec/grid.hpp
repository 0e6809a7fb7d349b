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
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace latspec {

using cplx = std::complex<double>;

/// Dispersion relation of the discrete Laplacian on Z^d in lattice gauge:
/// H0 u(x) = 2d u(x) - sum_{|e|=1} u(x+e), diagonalized by characters
/// e^{2 pi i x.xi} with eigenvalue h0(xi) = 4 sum_j sin^2(pi xi_j).
/// The spectrum is [0, 4d].
double symbol_eval(const std::vector<double>& xi);

/// Gradient of the symbol, d/dxi_j h0 = 4 pi sin(2 pi xi_j).
std::vector<double> symbol_grad(const std::vector<double>& xi);

/// Diagonal of the (diagonal) Hessian, 8 pi^2 cos(2 pi xi_j).
std::vector<double> symbol_hess_diag(const std::vector<double>& xi);

double symbol_eval(const double* xi, int d);
double symbol_grad_norm(const double* xi, int d);

/// One critical point of the symbol. The critical set is {0, 1/2}^d; the
/// Hessian has `signature` negative directions (the count of 1/2 entries),
/// so the point is an extremum exactly when signature is 0 or d.
struct ThresholdPoint {
  std::vector<double> xi;  ///< coordinates, each 0 or 1/2
  double energy = 0.0;     ///< h0 at the point, equals 4 * signature
  int signature = 0;       ///< negative Hessian directions
  bool elliptic = false;   ///< extremum (signature 0 or d) vs saddle
};

/// All 2^d critical points of the symbol, in lexicographic order of the
/// (0, 1/2) component pattern.
std::vector<ThresholdPoint> critical_points(int d);

/// Uniform N-points-per-axis discretization of the frequency torus, the
/// quadrature backbone for every kernel evaluation. Node k maps to k/N.
class TorusGrid {
 public:
  /// Throws errc::invalid_argument unless n is a power of two >= 16 and
  /// n^d stays within the node budget.
  TorusGrid(int d, long n);

  int dim() const noexcept { return d_; }
  long n() const noexcept { return n_; }
  long node_count() const noexcept { return nodes_; }

  /// Node budget shared by all grids: n^d complex doubles must fit in a
  /// few GB alongside FFT workspace.
  static constexpr long kMaxNodes = 1L << 26;

 private:
  int d_;
  long n_;
  long nodes_;
};

/// Minimal admissible per-axis point count for resolvent quadrature at
/// spectral distance `delta` = dist(z, [0, 4d]). Near the elliptic
/// thresholds (energy within 1 of 0 or 4d) the integrand peak has width
/// sqrt(delta), elsewhere width delta:
///   N_min = C_res / sqrt(delta)   (elliptic window)
///   N_min = C_res / delta         (otherwise)
/// with C_res = 32.
long resolution_min_n(int d, cplx z);

/// Distance from z to the essential band [0, 4d].
double band_distance(int d, cplx z);

constexpr double kResolutionConstant = 32.0;
constexpr double kEllipticWindow = 1.0;

}  // namespace latspec
