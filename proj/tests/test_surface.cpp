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

#include <cmath>
#include <complex>
#include <vector>

#include "latspec/box.hpp"
#include "latspec/bump.hpp"
#include "latspec/errors.hpp"
#include "latspec/grid.hpp"
#include "latspec/surface.hpp"

using namespace latspec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("global mesh lies on the level set with positive weights") {
  const SurfaceMesh mesh = SurfaceMesh::global(2, 2.0, 128);
  CHECK(mesh.dim() == 2);
  CHECK(mesh.mu() == doctest::Approx(2.0));
  CHECK(!mesh.points().empty());
  for (const SurfacePoint& p : mesh.points()) {
    CHECK(std::abs(symbol_eval(p.xi, 2) - 2.0) < 1e-8);
    CHECK(p.weight > 0.0);
    CHECK(p.tau == doctest::Approx((p.xi[0] - 0.25) + (p.xi[1] - 0.25)).epsilon(1e-12));
  }
}

TEST_CASE("surface integrals stabilize under mesh doubling at a regular energy") {
  // The dominant-axis chart partition cuts parameter cells at the chart
  // seams, so the total-measure quadrature is first order in the mesh
  // step: doubling should roughly halve the drift.
  const auto one = [](const SurfacePoint&) { return cplx(1.0, 0.0); };
  const cplx level1 = SurfaceMesh::global(2, 2.0, 128).integrate(one);
  const cplx level2 = SurfaceMesh::global(2, 2.0, 256).integrate(one);
  const cplx level3 = SurfaceMesh::global(2, 2.0, 512).integrate(one);
  const double drift12 = std::abs(level1 - level2) / std::abs(level2);
  const double drift23 = std::abs(level2 - level3) / std::abs(level3);
  CHECK(drift12 < 5e-2);
  CHECK(drift23 < 0.65 * drift12);

  const cplx c3 = SurfaceMesh::global(3, 5.0, 48).integrate(one);
  const cplx f3 = SurfaceMesh::global(3, 5.0, 96).integrate(one);
  CHECK(std::abs(c3 - f3) / std::abs(f3) < 2e-2);
}

TEST_CASE("surface integrals inherit lattice symmetries") {
  const SurfaceMesh mesh = SurfaceMesh::global(2, 2.0, 192);
  const auto wave = [](const long* x) {
    return [x](const SurfacePoint& p) {
      const double phase = 2.0 * kPi * (x[0] * p.xi[0] + x[1] * p.xi[1]);
      return cplx(std::cos(phase), std::sin(phase));
    };
  };
  const long e0[2] = {1, 0};
  const long e1[2] = {0, 1};
  const long me0[2] = {-1, 0};
  const cplx i0 = mesh.integrate(wave(e0));
  const cplx i1 = mesh.integrate(wave(e1));
  const cplx im = mesh.integrate(wave(me0));
  CHECK(std::abs(i0 - i1) < 1e-10);
  CHECK(std::abs(std::conj(i0) - im) < 1e-10);
}

TEST_CASE("patch meshes stay in their window on both branches") {
  // mu = 4 in d = 2: the level set contains the lines xi0 + xi1 = 1/2.
  const SurfaceMesh patch = SurfaceMesh::patch(2, 4.0, /*graph_axis=*/0, {0.20}, {0.30}, 64);
  CHECK(!patch.points().empty());
  // Coordinates live in [0, 1): the two graph roots sit at 1/2 - xi1 and
  // its reflection 1/2 + xi1.
  bool near_branch = false, far_branch = false;
  for (const SurfacePoint& p : patch.points()) {
    CHECK(std::abs(symbol_eval(p.xi, 2) - 4.0) < 1e-8);
    CHECK(p.xi[1] >= 0.20);
    CHECK(p.xi[1] <= 0.30);
    if (p.xi[0] < 0.5) near_branch = true;
    if (p.xi[0] > 0.5) far_branch = true;
  }
  CHECK(near_branch);  // xi0 = 1/2 - xi1
  CHECK(far_branch);   // xi0 = 1/2 + xi1
}

TEST_CASE("critical-point guard fires exactly when the cutoff covers one") {
  const SurfaceMesh mesh = SurfaceMesh::global(2, 4.0, 64);
  FrequencyCutoff uncut;  // identically one
  CHECK_THROWS_AS(mesh.require_clear_of_critical(uncut), const error&);

  FrequencyCutoff localized;
  localized.fn = [](const double* xi) {
    return BumpProfile::chi(4.0 * (xi[0] - 0.25)) * BumpProfile::chi(4.0 * (xi[1] - 0.25));
  };
  CHECK_NOTHROW(mesh.require_clear_of_critical(localized));
}

TEST_CASE("surface-localized evolution kernel is stable and symmetric") {
  const LatticeBox out(2, 3);
  const FiniteFunction f = {{{0, 0}, cplx(1.0, 0.0)}};
  FrequencyCutoff cut;
  cut.fn = [](const double* xi) {
    return BumpProfile::chi(xi[0] - 0.25) * BumpProfile::chi(xi[1] - 0.25);
  };
  const DeltaSurfaceResult a = delta_surface(2, 4.0, f, cut, out, 128);
  const DeltaSurfaceResult b = delta_surface(2, 4.0, f, cut, out, 256);
  CHECK(a.values.size() == static_cast<size_t>(out.site_count()));
  CHECK(a.err < 1e-3);

  double dev = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
  CHECK(dev < 1e-6);

  // Real data: kernel at -x is the conjugate of the kernel at x.
  long x[2];
  for (long idx = 0; idx < out.site_count(); ++idx) {
    out.coords_of(idx, x);
    const long mx[2] = {-x[0], -x[1]};
    const cplx vx = a.values[static_cast<size_t>(idx)];
    const cplx vmx = a.values[static_cast<size_t>(out.index_of(mx))];
    CHECK(std::abs(vmx - std::conj(vx)) < 1e-12);
  }
}
