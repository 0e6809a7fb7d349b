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

#include "box.hpp"
#include "grid.hpp"

namespace latspec {

/// Values of the free resolvent kernel G0(x; z) = int e^{2 pi i x.xi} /
/// (h0(xi) - z) dxi on the displacement box [-radius, radius]^d, together
/// with a per-site quadrature error estimate (difference against the
/// half-resolution grid). Lexicographic layout, same convention as
/// LatticeBox.
struct KernelTable {
  int d = 0;
  long radius = 0;
  cplx z;
  long grid_n = 0;
  std::vector<cplx> values;
  std::vector<double> err;

  cplx value(const long* x) const;
  double err_at(const long* x) const;
  long side() const { return 2 * radius + 1; }
};

/// Torus quadrature of the free kernel on an N-per-axis grid. Enforces the
/// resolution rule (throws resolution_error carrying the minimal admissible
/// N) and requires N >= 2*radius + 1 so displacements are unambiguous.
/// By Poisson summation the result equals the exact kernel periodized over
/// N Z^d; the reported error estimate tracks both aliasing and peak
/// resolution through the N vs N/2 difference.
KernelTable free_kernel(int d, cplx z, long radius, const TorusGrid& grid);

/// Single kernel value by direct streaming Riemann sum on the same grid as
/// the FFT path (identical nodes, different summation order; the two agree
/// to rounding). No N^d storage, so admissible N beyond the materialization
/// budget. x may be null for the on-diagonal value.
cplx green_direct(int d, cplx z, const long* x, long grid_n);

/// Smallest power of two satisfying both the resolution rule for z and the
/// displacement-box constraint.
long admissible_grid_n(int d, cplx z, long radius);

/// Kernel values on the displacement box from an n-per-axis torus
/// quadrature without the resolution gate. This is the model quadrature
/// used inside box-truncated operators, where the grid only has to resolve
/// transits across the box; pointwise kernel consumers should call
/// free_kernel instead.
std::vector<cplx> periodized_kernel_box(int d, cplx z, long radius, long grid_n);

}  // namespace latspec
