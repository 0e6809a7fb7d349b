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

#include <array>
#include <cstdint>
#include <vector>

#include "grid.hpp"

namespace latspec {

enum class Boundary { dirichlet, periodic };

/// Finite window [-R, R]^d of the lattice with a fixed lexicographic site
/// ordering (last coordinate fastest). Dirichlet truncation is the default
/// for eigenvalue work; periodic wrapping backs the Fourier diagnostics.
class LatticeBox {
 public:
  LatticeBox(int d, long radius, Boundary bc = Boundary::dirichlet);

  int dim() const noexcept { return d_; }
  long radius() const noexcept { return radius_; }
  long side() const noexcept { return side_; }
  long site_count() const noexcept { return sites_; }
  Boundary boundary() const noexcept { return bc_; }

  /// Lexicographic index of a site; coordinates must lie in [-R, R].
  long index_of(const long* x) const;
  /// Inverse of index_of.
  void coords_of(long idx, long* x) const;

  bool contains(const long* x) const noexcept;

  /// Euclidean Japanese bracket <x> = sqrt(1 + |x|^2) of the site.
  static double bracket(const long* x, int d);

 private:
  int d_;
  long radius_;
  long side_;
  long sites_;
  Boundary bc_;
};

/// y = (2d - adjacency) u on the box. Dirichlet: neighbors outside the box
/// contribute zero. Periodic: coordinates wrap modulo the side length.
std::vector<cplx> apply_h0(const LatticeBox& box, const std::vector<cplx>& u);

}  // namespace latspec
