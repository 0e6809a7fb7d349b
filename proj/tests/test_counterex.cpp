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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "latspec/counterex.hpp"
#include "latspec/errors.hpp"
#include "latspec/potential.hpp"

using namespace latspec;

TEST_CASE("tube packets: scaling exponents and tube inclusion at coarse scale") {
  const KnappReport rep = knapp_family(3, 6.0, {0.1, 0.0625, 0.04}, 32);
  CHECK(rep.threshold_p == doctest::Approx(10.0 / 3.0));
  CHECK(rep.aperture > 0.0);
  CHECK(rep.tube_ok);
  CHECK(rep.tube_max <= 1.0);
  CHECK(std::abs(rep.slope_q - 2.0) < 0.5);
  CHECK(std::abs(rep.slope_m - 10.0 / 3.0) < 0.6);
  CHECK(rep.verdict == "ratio_decays");

  // Below the critical exponent the weighted mass stops decaying faster.
  const KnappReport low = knapp_family(3, 2.0, {0.1, 0.0625, 0.04}, 32);
  CHECK(low.expected_m == doctest::Approx(0.0));
  CHECK(low.verdict == "ratio_grows");
}

TEST_CASE("tube packet parameter validation") {
  CHECK_THROWS_AS((void)knapp_family(1, 6.0), const error&);
  CHECK_THROWS_AS((void)knapp_family(3, 1.5), const error&);
  CHECK_THROWS_AS((void)knapp_family(3, 6.0, {0.5}), const error&);
}

TEST_CASE("flat-band kernel: exact line, modulated factorization, transverse decay") {
  const FlatbandReport rep = flatband_kernel(0.2, 24, 512);
  CHECK(rep.line_max_dev < 1e-12);
  CHECK(rep.factorization_err < 1e-12);
  CHECK(rep.mesh_points > 0);

  // |I(s,s)| is exactly constant along the diagonal.
  const double j0 = rep.j_abs[0];
  CHECK(j0 > 0.0);
  for (double v : rep.diag_abs) CHECK(v == doctest::Approx(j0).epsilon(1e-12));

  // The transverse profile J decays fast: four orders by t = 20.
  for (size_t t = 20; t < rep.j_abs.size(); ++t) CHECK(rep.j_abs[t] / j0 < 1e-4);
}

TEST_CASE("flat-band weight restriction must stay inside the window") {
  CHECK_THROWS_AS((void)flatband_kernel(0.3, 8, 128), const error&);
  CHECK_THROWS_AS((void)flatband_kernel(0.0, 8, 128), const error&);
}

TEST_CASE("weighted flat-band image diverges logarithmically in l2") {
  const FlatbandBlowup bl = flatband_weighted_blowup(0.2, 512, 512);
  CHECK(bl.verdict == "l2_divergent");
  const double expect = std::sqrt(2.0) * bl.j0_abs * bl.j0_abs;
  CHECK(std::abs(bl.log_slope - expect) / expect < 0.2);
  // The pointwise profile decays like s^{-1/2}.
  CHECK(std::abs(bl.profile_slope + 0.5) < 0.1);
}

TEST_CASE("threshold form diverges logarithmically in 2d") {
  const FiniteFunction v = half_density(Potential::PointMass({0, 0}, -1.0));
  REQUIRE(v.size() == 1);
  CHECK(std::abs(v[0].second - cplx(1.0, 0.0)) < 1e-15);

  // The ladder must span enough decades for the log term to dominate the
  // regular part of the form; the default grid reaches mu ~ 3e-3.
  const ThresholdDivergence rep = threshold_divergence(2, v);
  CHECK(rep.verdict == "log_divergent");
  CHECK(rep.expected_slope == doctest::Approx(1.0 / (2.0 * 3.14159265358979323846)));
  CHECK(std::abs(rep.fitted_slope - rep.expected_slope) / rep.expected_slope < 0.15);
  for (bool c : rep.converged) CHECK(c);
}

TEST_CASE("threshold form saturates in 3d") {
  const FiniteFunction v = half_density(Potential::PointMass({0, 0, 0}, -1.0));
  const ThresholdDivergence rep = threshold_divergence(3, v, {0.3, 0.1, 0.05}, 512, 1e-3);
  CHECK(rep.verdict == "bounded");
  const auto mx = *std::max_element(rep.value.begin(), rep.value.end());
  const auto mn = *std::min_element(rep.value.begin(), rep.value.end());
  CHECK(mx / mn <= 1.25);
}

TEST_CASE("fractional trace table: borderline growth appears exactly at s = 1") {
  const SobolevProbe probe = sobolev_probe(1, {0.5, 1.0}, {64, 128, 256});
  REQUIRE(probe.norm_sq.size() == 2);
  REQUIRE(probe.norm_sq[0].size() == 3);
  for (const auto& row : probe.norm_sq)
    for (double v : row) CHECK(v > 0.0);
  // s = 1/2 refinement drift is far smaller than the s = 1 growth.
  const double drift_half = std::abs(probe.growth_pct[0].back());
  const double growth_one = probe.growth_pct[1].back();
  CHECK(growth_one > 0.0);
  CHECK(drift_half < 0.5 * growth_one);
}

TEST_CASE("radial surface form: log divergence and its cutoff remedy") {
  // Default ladder reaches eps = 1e-5; the fitted log slope only approaches
  // the analytic coefficient in that asymptotic regime.
  const UltraSurfaceForm rep = ultra_surface_form({}, 0.0);
  CHECK(rep.verdict == "log_divergent");
  CHECK(rep.analytic_slope == doctest::Approx(3.14159265358979323846 / std::sqrt(2.0)));
  CHECK(std::abs(rep.fitted_slope - rep.analytic_slope) / rep.analytic_slope < 0.1);

  // The inner cutoff removes the origin; the form saturates once eps drops
  // well below the squared cutoff radius (relative error ~ eps / cut^2).
  const std::vector<double> fine = {3.1622776601683795e-5, 1e-5,
                                    3.1622776601683796e-6, 1e-6};
  const UltraSurfaceForm cut = ultra_surface_form(fine, 0.02);
  CHECK(cut.verdict == "bounded");
}
