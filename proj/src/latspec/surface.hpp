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
#include <functional>
#include <utility>
#include <vector>

#include "box.hpp"
#include "grid.hpp"

namespace latspec {

inline constexpr int kMaxSurfaceDim = 6;

/// One quadrature node of the level set {h0 = mu}, carrying the combined
/// weight (parameter cell volume)/|d h0/d xi_axis| so that
///   integral over {h0=mu} of F dsigma/|grad h0|  ~=  sum F(xi) * weight.
struct SurfacePoint {
  double xi[kMaxSurfaceDim];
  double weight = 0.0;
  double grad = 0.0;  ///< |grad h0| at the node
  double tau = 0.0;   ///< sum_j (xi_j - 1/4), the flat-point offset
};

/// Cutoff applied on the frequency side. fn may be null (no cutoff).
struct FrequencyCutoff {
  std::function<double(const double*)> fn;
  double operator()(const double* xi) const { return fn ? fn(xi) : 1.0; }
};

/// Quadrature mesh for {h0 = mu} built from graph patches: on each patch
/// one coordinate is solved from the others, and the surface measure
/// divided by |grad h0| collapses to dxi'/|d h0/d xi_axis|.
class SurfaceMesh {
 public:
  /// Whole level set, partitioned by the dominant-gradient axis: a node
  /// produced with graph axis A is kept iff argmax_j |d_j h0| = A, ties
  /// resolved toward the lowest axis (with a relative tolerance, so exact
  /// gradient ties like the d=2 flat line stay on one patch).
  /// For d = 1 the level set is the two-point solution set and n_per_axis
  /// is ignored.
  static SurfaceMesh global(int d, double mu, long n_per_axis = 128);

  /// Single graph patch over a parameter window: params are the axes other
  /// than graph_axis in increasing order, uniformly sampled over
  /// [lo[i], hi[i]) with n_per_axis nodes each. Both roots of the graph
  /// solve are kept. No dominant-axis filter.
  static SurfaceMesh patch(int d, double mu, int graph_axis, const std::vector<double>& lo,
                           const std::vector<double>& hi, long n_per_axis);

  int dim() const { return d_; }
  double mu() const { return mu_; }
  const std::vector<SurfacePoint>& points() const { return pts_; }

  /// Integral of F dsigma/|grad h0| for complex-valued F on the mesh.
  cplx integrate(const std::function<cplx(const SurfacePoint&)>& f) const;

  /// Throws errc::domain when the cutoff fails to vanish on the critical
  /// set covered by this mesh: the critical points of h0 on {h0 = mu}
  /// (coordinates in {0, 1/2}, restricted to the parameter window for
  /// patches) are tested directly, and every node with cutoff(xi) != 0
  /// must additionally satisfy |grad h0| > floor.
  void require_clear_of_critical(const FrequencyCutoff& cutoff, double floor = 1e-8) const;

 private:
  int d_ = 0;
  double mu_ = 0.0;
  std::vector<SurfacePoint> pts_;
  std::vector<std::array<double, kMaxSurfaceDim>> crit_;  ///< covered critical points
};

/// Finitely supported lattice function as (site, value) pairs.
using FiniteFunction = std::vector<std::pair<std::vector<long>, cplx>>;

struct DeltaSurfaceResult {
  std::vector<cplx> values;  ///< on out_box, lexicographic order
  double err = 0.0;          ///< max site difference against the half mesh
  long mesh_points = 0;
};

/// (delta(H0 - mu) chi(D) f)(x) = sum_nodes e^{2 pi i x.xi} chi(xi) fhat(xi) w
/// with fhat(xi) = sum_y f(y) e^{-2 pi i y.xi}. The error estimate comes
/// from re-evaluating on the half-resolution mesh.
DeltaSurfaceResult delta_surface(int d, double mu, const FiniteFunction& f,
                                 const FrequencyCutoff& chi, const LatticeBox& out_box,
                                 long n_per_axis = 128);

}  // namespace latspec
