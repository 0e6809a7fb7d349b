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

#include <functional>
#include <vector>

#include "box.hpp"

namespace latspec {

/// Revival horizon of a periodic box of side L = 2R+1: the evolution is
/// trusted only for |t| <= L/(4 pi), before the packet can wrap around.
double revival_horizon(long radius);

/// Exact multiplier evolution u(t) = F^{-1} e^{-i t h0} F u0 on a periodic
/// box. Throws when the box is not periodic, or past the revival horizon
/// (resolution_error carrying the minimal admissible radius).
std::vector<cplx> propagate(const LatticeBox& box, const std::vector<cplx>& u0, double t);

struct DispersiveFit {
  int d = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  bool inconclusive = false;  ///< residual above 0.15
  long ring_n = 0;
  double envelope_sup = 0.0;  ///< max of sup_norm * <t>^{d/3} over the window
  std::vector<double> t;
  std::vector<double> sup_norm;
  std::vector<double> l2_norm;
};

/// Sup-norm decay exponent of e^{-itH0} delta_0. The point evolution
/// factorizes across axes, so the d-dimensional sup equals the d-th power
/// of a 1D ring sup; the ring is auto-sized to keep t_max inside the
/// revival horizon. Expected slope -d/3.
DispersiveFit dispersive_fit(int d, double t_min = 1e2, double t_max = 1e4, int samples = 25,
                             long ring_n = 0);

/// Spacetime norm ( integral over [-T,T] of ||u(t)||_{p*,2}^2 dt )^{1/2}
/// with p* = 2d/(d-3), for the evolution of u0 on a periodic box. Requires
/// d >= 4 (the exponent is undefined below). Dense per-snapshot Lorentz
/// norms; intended for small boxes and cross-checks.
double strichartz_norm(const LatticeBox& box, const std::vector<cplx>& u0, double T);

/// Same quantity for u0 = delta_0, computed through the tensor
/// factorization: per-axis |u1| histograms are convolved in log scale to
/// get the distribution function of the product state, so the box never
/// has to be materialized in d dimensions.
double strichartz_norm_point(int d, double T, long ring_n = 0);

/// Retarded Duhamel solution of i u' = H0 u + F on a periodic box:
///   u(T) = e^{-iT H0} u0 - i * int_0^T e^{-i(T-s) H0} F(s) ds,
/// with the time integral on a uniform trapezoid grid of `steps` cells.
/// Exact when e^{i s H0} F(s) is linear in s (e.g. free-flight forcing).
std::vector<cplx> duhamel_propagate(const LatticeBox& box, const std::vector<cplx>& u0,
                                    const std::function<std::vector<cplx>(double)>& forcing,
                                    double T, long steps = 64);

struct ContinuumDispersive {
  double t = 0.0;
  double sup = 0.0;          ///< measured sup over the product grid
  double envelope = 0.0;     ///< (4 pi |t|)^{-d/2}
  double closed_form = 0.0;  ///< exact Gaussian value (1+16 pi^2 t^2)^{-d/4}
};

/// Continuum propagator with split signature: k axes evolve with symbol
/// +xi^2 and d-k with -xi^2; Gaussian data e^{-pi|x|^2} evolves in closed
/// form per axis, which is the oracle the grid evolution is checked
/// against. Throws when the grid cannot resolve the chirp at time t.
ContinuumDispersive continuum_dispersive(int d, int k, double t, long grid_n = 0);

}  // namespace latspec
