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

#include <vector>

namespace latspec {

/// The engine's one concrete smooth cutoff and its Fourier transform.
///
///   chi(u) = exp(1 - 1/(1 - (4u)^2))   for |u| < 1/4, else 0
///
/// chi is C-infinity, even, supported in (-1/4, 1/4), and equals 1 exactly
/// at u = 0. Its transform psi(y) = int chi(u) e^{2 pi i u y} du is real,
/// even, and decays faster than any polynomial; psi is cached on a fine
/// grid (one FFT at construction) and interpolated.
class BumpProfile {
 public:
  BumpProfile();

  static double chi(double u);

  /// Interpolated transform; |y| beyond y_max() returns 0 (the true value
  /// is below 1e-15 there).
  double psi(double y) const;

  double y_max() const { return ymax_; }

  /// Transform by direct slow quadrature, the oracle for the cached table.
  static double psi_direct(double y, long quad_points = 1 << 14);

 private:
  std::vector<double> table_;  // psi on y = k*dy_, k >= 0
  double dy_ = 0.0;
  double ymax_ = 0.0;
};

/// Shared instance (the table build costs one 64k FFT).
const BumpProfile& shared_bump();

}  // namespace latspec
