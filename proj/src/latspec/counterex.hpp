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

#include "potential.hpp"
#include "surface.hpp"

namespace latspec {

/// Tube-concentrated wave packets on the energy surface {h0 = 2d}. The
/// frequency profile is a smooth bump of width eps in the d-1 tangential
/// axes around the flat point (1/4, ..., 1/4) times a bump of width
/// a*eps^3 in the normal offset tau = sum_j (xi_j - 1/4). The family pits
/// the surface mass Q(eps) = ||ghat||^2_{L2(dsigma)} (expected slope d-1
/// in eps) against the sheared weighted mass M(eps) (expected slope
/// (d+2)(1-2/p)); their ratio decays iff p exceeds 2(d+2)/3.
struct KnappReport {
  int d = 0;
  double p = 0.0;
  double aperture = 0.0;     ///< a in the normal cutoff chi(tau / (a eps^3))
  double threshold_p = 0.0;  ///< 2(d+2)/3
  std::vector<double> eps;
  std::vector<double> surface_mass;   ///< Q(eps)
  std::vector<double> weighted_mass;  ///< M(eps)
  double slope_q = 0.0, slope_m = 0.0;        ///< fitted vs log eps
  double expected_q = 0.0, expected_m = 0.0;  ///< d-1 and (d+2)(1-2/p)
  double residual_q = 0.0, residual_m = 0.0;
  double tube_max = 0.0;  ///< max |tau| / (a eps^3) over active cap nodes
  bool tube_ok = false;   ///< every active node satisfied |tau| <= a eps^3
  std::string verdict;    ///< "ratio_decays" or "ratio_grows"
};

/// Runs the family at exponent p (p >= 2, d >= 2). aperture = 0 picks the
/// smallest a with a 25% margin that keeps the cap inside the tube.
KnappReport knapp_family(int d, double p, std::vector<double> eps_list = {}, long mesh_n = 48,
                         double aperture = 0.0);

/// d = 2 energy surface through the flat point at mu = 4: inside the
/// cutoff window the surface is the exact line xi1 + xi2 = 1/2, so the
/// surface-localized kernel I(x) exactly equals e^{i pi x2} J(x1 - x2)
/// for a single-variable profile J.
struct FlatbandReport {
  double r = 0.0;  ///< cutoff half-width around (1/4, 1/4); must be < 1/4
  long mesh_points = 0;
  double line_max_dev = 0.0;       ///< max |xi1 + xi2 - 1/2| over active nodes
  double factorization_err = 0.0;  ///< max |I(x) - e^{i pi x2} J(x1-x2)|
  long box_radius = 0;
  std::vector<double> j_abs;     ///< |J(t)| for t = 0..2R
  std::vector<double> diag_abs;  ///< |I(s, s)| for s = -R..R (flat direction)
};
FlatbandReport flatband_kernel(double r, long box_radius = 24, long mesh_n = 512);

/// Weighted image <x>^{-1/2} I(x) of the point mass under the flat-band
/// kernel: constant modulus along the line direction, so the l2 mass in a
/// window of size S grows like log S and no weighted bound can hold.
struct FlatbandBlowup {
  double r = 0.0;
  double j0_abs = 0.0;  ///< |J(0)|, the modulus along the diagonal
  std::vector<double> s;
  std::vector<double> profile;  ///< |<(s,s)>^{-1/2} I(s,s)|
  double profile_slope = 0.0;   ///< log-log fit, expected -1/2
  std::vector<double> cutoffs;
  std::vector<double> partial_l2;  ///< sum_{|s| <= S} |profile|^2
  double log_slope = 0.0;          ///< fit vs ln S, expected sqrt(2) |J(0)|^2
  double residual = 0.0;
  std::string verdict;  ///< "l2_divergent" or "l2_bounded"
};
FlatbandBlowup flatband_weighted_blowup(double r, long s_max = 4000, long mesh_n = 512);

/// Quadratic form <v, (H0 + mu^2)^{-1} v> swept toward the band edge.
/// In d = 2 it diverges like |vhat(0)|^2/(2 pi) * ln(1/mu); in d >= 3 it
/// stays bounded. Each mu is evaluated by size-doubling torus quadrature
/// with its own convergence certificate.
struct ThresholdDivergence {
  int d = 0;
  std::vector<double> mu;
  std::vector<double> value;
  std::vector<long> n_used;     ///< quadrature size at convergence
  std::vector<bool> converged;  ///< false rows are excluded from the fit
  double fitted_slope = 0.0;    ///< vs ln(1/mu)
  double expected_slope = 0.0;  ///< |vhat(0)|^2 / (2 pi)
  double residual = 0.0;
  std::string verdict;  ///< "log_divergent", "bounded", or "inconclusive"
};
ThresholdDivergence threshold_divergence(int d, const FiniteFunction& v,
                                         std::vector<double> mu_list = {}, long n_max = 0,
                                         double rel_tol = 1e-3);

/// x -> sqrt(|V(x)|) on the support, the canonical test vector for the
/// threshold form. Requires a finitely supported potential.
FiniteFunction half_density(const Potential& v);

/// Fractional Sobolev mass of the radial profile chi(|x|/4) |x|^{-(d-2)/2}
/// on [-2, 2)^d, sampled at cell centers and measured through the discrete
/// H^s sum. Resolution-doubling growth of the s = 1 row is the signature
/// of the borderline trace exponent in d = 3.
struct SobolevProbe {
  int d = 0;
  double box_size = 4.0;
  std::vector<double> s_list;
  std::vector<long> n_list;
  /// norm_sq[i][j] = ||phi||_{H^{s_i}}^2 at resolution n_list[j]
  std::vector<std::vector<double>> norm_sq;
  /// growth_pct[i][j] = 100 (norm_sq[i][j+1]/norm_sq[i][j] - 1)
  std::vector<std::vector<double>> growth_pct;
};
SobolevProbe sobolev_probe(int d, std::vector<double> s_list = {0.5, 1.0},
                           std::vector<long> n_list = {128, 256, 512});

/// Radial section of the regularized split-signature surface form in
/// d = 3, signature (1, 2):
///   F(eps) = 2 pi int_0^inf r chi(sqrt(2r^2+eps))^2
///                  / (sqrt(r^2+eps) sqrt(2r^2+eps)) dr.
/// The cone tip drives F ~ (pi/sqrt2) ln(1/eps); multiplying the profile
/// by a cutoff vanishing near r = 0 (inner_cut > 0) restores boundedness.
struct UltraSurfaceForm {
  std::vector<double> eps;
  std::vector<double> value;
  double fitted_slope = 0.0;   ///< vs ln(1/eps)
  double analytic_slope = 0.0; ///< pi/sqrt(2) * chi(0)^2 for the uncut form
  double residual = 0.0;
  double inner_cut = 0.0;
  std::string verdict;  ///< "log_divergent" or "bounded" (or "inconclusive")
};
UltraSurfaceForm ultra_surface_form(std::vector<double> eps_list = {}, double inner_cut = 0.0);

}  // namespace latspec
