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
#include <random>
#include <vector>

#include "latspec/box.hpp"
#include "latspec/bump.hpp"
#include "latspec/errors.hpp"
#include "latspec/fftp.hpp"
#include "latspec/fit.hpp"
#include "latspec/grid.hpp"
#include "latspec/lorentz.hpp"
#include "latspec/opnorm.hpp"
#include "latspec/potential.hpp"

using namespace latspec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("symbol: values, gradient, curvature") {
  CHECK(symbol_eval({0.0}) == doctest::Approx(0.0));
  CHECK(symbol_eval({0.5, 0.5}) == doctest::Approx(8.0));  // 4d at the band top
  CHECK(symbol_eval({0.25}) == doctest::Approx(2.0));  // 4 sin^2(pi/4) = 2
  const double v = 4.0 * std::pow(std::sin(kPi * 0.17), 2) + 4.0 * std::pow(std::sin(kPi * 0.31), 2);
  CHECK(symbol_eval({0.17, 0.31}) == doctest::Approx(v).epsilon(1e-12));

  const std::vector<double> xi = {0.13, 0.29, 0.41};
  const std::vector<double> g = symbol_grad(xi);
  const std::vector<double> hd = symbol_hess_diag(xi);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    std::vector<double> xp = xi, xm = xi;
    xp[static_cast<size_t>(j)] += h;
    xm[static_cast<size_t>(j)] -= h;
    const double fd = (symbol_eval(xp) - symbol_eval(xm)) / (2.0 * h);
    const double fd2 = (symbol_eval(xp) - 2.0 * symbol_eval(xi) + symbol_eval(xm)) / (h * h);
    CHECK(g[static_cast<size_t>(j)] == doctest::Approx(fd).epsilon(1e-6));
    CHECK(hd[static_cast<size_t>(j)] == doctest::Approx(fd2).epsilon(1e-3));
  }
  double gn = 0.0;
  for (double gj : g) gn += gj * gj;
  CHECK(symbol_grad_norm(xi.data(), 3) == doctest::Approx(std::sqrt(gn)).epsilon(1e-12));
}

TEST_CASE("critical points enumerate {0, 1/2}^d with energies 4k") {
  for (int d = 1; d <= 4; ++d) {
    const auto pts = critical_points(d);
    CHECK(pts.size() == (1u << d));
    for (const auto& p : pts) {
      int halves = 0;
      for (int j = 0; j < d; ++j) {
        const double c = p.xi[static_cast<size_t>(j)];
        CHECK((c == 0.0 || c == 0.5));
        if (c == 0.5) ++halves;
      }
      CHECK(p.energy == doctest::Approx(4.0 * halves));
      CHECK(p.elliptic == (halves == 0 || halves == d));
      // The symbol gradient genuinely vanishes there.
      CHECK(symbol_grad_norm(p.xi.data(), d) == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("band distance and the resolution rule") {
  CHECK(band_distance(1, cplx(-1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(band_distance(1, cplx(2.0, 0.5)) == doctest::Approx(0.5));
  CHECK(band_distance(2, cplx(9.0, 0.0)) == doctest::Approx(1.0));
  CHECK(band_distance(3, cplx(6.0, 0.0)) == doctest::Approx(0.0));

  // Near an elliptic edge the rule is 32/sqrt(delta), elsewhere 32/delta.
  CHECK(resolution_min_n(1, cplx(-1.0, 0.0)) == 32);
  CHECK(resolution_min_n(1, cplx(-0.01, 0.0)) == 320);
  CHECK(resolution_min_n(1, cplx(-2.0, 0.0)) == 16);
  CHECK(resolution_min_n(2, cplx(4.0, 0.25)) == 128);  // interior threshold: 32/0.25
  CHECK_THROWS_AS((void)resolution_min_n(2, cplx(3.0, 0.0)), const error&);
}

TEST_CASE("torus grid guards") {
  const TorusGrid g(2, 64);
  CHECK(g.dim() == 2);
  CHECK(g.n() == 64);
  CHECK(g.node_count() == 64L * 64L);
  CHECK_THROWS_AS(TorusGrid(1, 48), const error&);    // not a power of two
  CHECK_THROWS_AS(TorusGrid(3, 2048), const error&);  // exceeds the node budget
}

TEST_CASE("lattice box indexing and weights") {
  const LatticeBox box(2, 3);
  CHECK(box.site_count() == 49);
  CHECK(box.side() == 7);
  long x[2];
  for (long idx = 0; idx < box.site_count(); ++idx) {
    box.coords_of(idx, x);
    CHECK(std::abs(x[0]) <= 3);
    CHECK(std::abs(x[1]) <= 3);
    CHECK(box.index_of(x) == idx);
    CHECK(box.contains(x));
  }
  const long outside[2] = {4, 0};
  CHECK(!box.contains(outside));

  const long origin[2] = {0, 0};
  CHECK(LatticeBox::bracket(origin, 2) == doctest::Approx(1.0));
  const long p34[2] = {3, -4};
  CHECK(LatticeBox::bracket(p34, 2) == doctest::Approx(std::sqrt(26.0)));
}

namespace {

/// Reference neighbor sum for the lattice Laplacian on a box.
std::vector<cplx> h0_reference(const LatticeBox& box, const std::vector<cplx>& u) {
  const int d = box.dim();
  const long side = box.side();
  std::vector<cplx> out(u.size());
  std::vector<long> x(static_cast<size_t>(d)), y(static_cast<size_t>(d));
  for (long idx = 0; idx < box.site_count(); ++idx) {
    box.coords_of(idx, x.data());
    cplx acc = 2.0 * d * u[static_cast<size_t>(idx)];
    for (int j = 0; j < d; ++j) {
      for (int s = -1; s <= 1; s += 2) {
        y = x;
        y[static_cast<size_t>(j)] += s;
        if (box.boundary() == Boundary::periodic) {
          if (y[static_cast<size_t>(j)] > box.radius()) y[static_cast<size_t>(j)] -= side;
          if (y[static_cast<size_t>(j)] < -box.radius()) y[static_cast<size_t>(j)] += side;
        } else if (!box.contains(y.data())) {
          continue;
        }
        acc -= u[static_cast<size_t>(box.index_of(y.data()))];
      }
    }
    out[static_cast<size_t>(idx)] = acc;
  }
  return out;
}

std::vector<cplx> random_state(long n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(static_cast<size_t>(n));
  for (auto& c : v) c = cplx(u(rng), u(rng));
  return v;
}

}  // namespace

TEST_CASE("apply_h0 matches the dense neighbor sum") {
  for (Boundary bc : {Boundary::dirichlet, Boundary::periodic}) {
    const LatticeBox box(2, 2, bc);
    const auto u = random_state(box.site_count(), 7);
    const auto got = apply_h0(box, u);
    const auto want = h0_reference(box, u);
    double dev = 0.0;
    for (size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(got[i] - want[i]));
    CHECK(dev < 1e-13);
  }
}

TEST_CASE("fft roundtrip, delta spectrum, and Parseval") {
  const std::vector<long> dims = {6, 4};
  auto data = random_state(24, 11);
  const auto orig = data;

  double l2 = 0.0;
  for (const auto& c : data) l2 += std::norm(c);

  fft_inplace(dims, data, -1);
  double l2hat = 0.0;
  for (const auto& c : data) l2hat += std::norm(c);
  CHECK(l2hat == doctest::Approx(24.0 * l2).epsilon(1e-12));  // unnormalized transform

  fft_inplace(dims, data, +1);
  for (size_t i = 0; i < data.size(); ++i)
    CHECK(std::abs(data[i] / 24.0 - orig[i]) < 1e-13);

  std::vector<cplx> delta(24, cplx(0.0, 0.0));
  delta[0] = 1.0;
  fft_inplace(dims, delta, -1);
  for (const auto& c : delta) CHECK(std::abs(c - cplx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("packed real-to-complex transform matches the complex one") {
  const std::vector<long> dims = {8, 6};
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> in(48);
  for (auto& v : in) v = u(rng);

  std::vector<cplx> out;
  fft_r2c(dims, in, out);
  CHECK(out.size() == 8u * (6u / 2u + 1u));

  std::vector<cplx> full(48);
  for (size_t i = 0; i < 48; ++i) full[i] = in[i];
  fft_inplace(dims, full, -1);
  for (long r = 0; r < 8; ++r)
    for (long c = 0; c < 4; ++c)
      CHECK(std::abs(out[static_cast<size_t>(r * 4 + c)] - full[static_cast<size_t>(r * 6 + c)]) <
            1e-12);
}

TEST_CASE("line fits recover exact laws") {
  std::vector<double> x, y;
  for (int i = 1; i <= 8; ++i) {
    x.push_back(i);
    y.push_back(3.0 - 2.0 * i);
  }
  const LineFit lf = fit_line(x, y);
  CHECK(lf.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(lf.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(lf.residual < 1e-12);

  std::vector<double> t, p, s;
  for (int i = 1; i <= 6; ++i) {
    t.push_back(std::pow(10.0, i));
    p.push_back(5.0 * std::pow(t.back(), -1.5));
    s.push_back(2.0 + 0.7 * std::log(t.back()));
  }
  CHECK(fit_loglog(t, p).slope == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(fit_semilogx(t, s).slope == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("top singular value on dense operators") {
  struct Diag : LinOp {
    long dim() const override { return 3; }
    void apply(const cplx* in, cplx* out) const override {
      out[0] = 3.0 * in[0];
      out[1] = 1.0 * in[1];
      out[2] = 0.5 * in[2];
    }
    void apply_adjoint(const cplx* in, cplx* out) const override { apply(in, out); }
  } diag;
  CHECK(top_singular_value(diag) == doctest::Approx(3.0).epsilon(1e-8));

  struct Nilpotent : LinOp {
    long dim() const override { return 2; }
    void apply(const cplx* in, cplx* out) const override {
      out[0] = 2.0 * in[1];
      out[1] = 0.0;
    }
    void apply_adjoint(const cplx* in, cplx* out) const override {
      out[1] = 2.0 * in[0];
      out[0] = 0.0;
    }
  } nil;
  CHECK(top_singular_value(nil) == doctest::Approx(2.0).epsilon(1e-8));

  std::vector<cplx> warm;
  NormOptions opts;
  const double first = top_singular_value(nil, opts, &warm);
  opts.warm_start = &warm;
  const double second = top_singular_value(nil, opts, &warm);
  CHECK(first == doctest::Approx(second).epsilon(1e-10));
}

TEST_CASE("potential families evaluate correctly") {
  const Potential pd = Potential::PowerDecay(2.0);
  const long x0[2] = {0, 0};
  const long x1[2] = {1, 0};
  CHECK(pd.eval(x0, 2) == doctest::Approx(-1.0));
  CHECK(pd.eval(x1, 2) == doctest::Approx(-0.5));
  CHECK(!pd.finite_support());

  const Potential pm = Potential::PointMass({1, -2}, 3.5);
  const long at[2] = {1, -2};
  CHECK(pm.eval(at, 2) == doctest::Approx(3.5));
  CHECK(pm.eval(x0, 2) == doctest::Approx(0.0));
  CHECK(pm.finite_support());
  CHECK(pm.support_sites().size() == 1);
  CHECK(pm.support_radius() == 2);

  const Potential tb = Potential::Table({{{0, 0}, -1.0}, {{2, 1}, 0.25}});
  const long x21[2] = {2, 1};
  CHECK(tb.eval(x21, 2) == doctest::Approx(0.25));
  CHECK(tb.support_sites().size() == 2);
}

TEST_CASE("lorentz norms: lp agreement, max form, weighted consistency") {
  const std::vector<double> v = {0.3, 1.7, 0.9, 2.4, 0.1};
  double l3 = 0.0;
  for (double a : v) l3 += std::pow(a, 3.0);
  l3 = std::cbrt(l3);
  CHECK(lorentz_norm(v, 3.0, 3.0) == doctest::Approx(l3).epsilon(1e-12));

  // r = infinity: max_k k^{1/p} a_k over the sorted sequence.
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double mx = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k)
    mx = std::max(mx, std::pow(static_cast<double>(k + 1), 1.0 / 2.0) * sorted[k]);
  CHECK(lorentz_norm(v, 2.0, lorentz_inf) == doctest::Approx(mx).epsilon(1e-12));

  std::vector<std::pair<double, double>> hist;
  for (double a : v) hist.emplace_back(a, 1.0);
  for (double r : {1.0, 2.0, 3.5}) {
    CHECK(lorentz_norm_weighted(hist, 2.5, r) ==
          doctest::Approx(lorentz_norm(v, 2.5, r)).epsilon(1e-12));
  }
  // Splitting a value across two weighted entries changes nothing.
  std::vector<std::pair<double, double>> split = {{2.4, 1.0}, {0.9, 2.0}, {0.3, 1.0}};
  const std::vector<double> flat = {2.4, 0.9, 0.9, 0.3};
  CHECK(lorentz_norm_weighted(split, 2.0, 2.0) ==
        doctest::Approx(lorentz_norm(flat, 2.0, 2.0)).epsilon(1e-12));

  // The secondary index is monotone: r1 <= r2 gives a larger norm at r1.
  CHECK(lorentz_norm(v, 2.0, 1.0) >= lorentz_norm(v, 2.0, 2.0));
  CHECK(lorentz_norm(v, 2.0, 2.0) >= lorentz_norm(v, 2.0, lorentz_inf));
}

TEST_CASE("bump profile and its transform") {
  CHECK(BumpProfile::chi(0.0) == doctest::Approx(1.0));
  CHECK(BumpProfile::chi(0.25) == doctest::Approx(0.0));
  CHECK(BumpProfile::chi(-0.25) == doctest::Approx(0.0));
  CHECK(BumpProfile::chi(0.3) == doctest::Approx(0.0));
  CHECK(BumpProfile::chi(0.2) > 0.0);
  CHECK(BumpProfile::chi(0.2) < 1.0);
  CHECK(BumpProfile::chi(0.2) == doctest::Approx(BumpProfile::chi(-0.2)).epsilon(1e-15));

  const BumpProfile& b = shared_bump();
  for (double y : {0.0, 1.5, 10.3, 100.0}) {
    CHECK(b.psi(y) == doctest::Approx(BumpProfile::psi_direct(y)).epsilon(5e-7));
    CHECK(b.psi(-y) == doctest::Approx(b.psi(y)).epsilon(1e-14));
  }
  CHECK(b.psi(b.y_max() + 1.0) == 0.0);
}

TEST_CASE("error taxonomy carries context") {
  const resolution_error re("too coarse", 512);
  CHECK(re.code() == errc::resolution);
  CHECK(re.min_n() == 512);
  const convergence_error ce("no convergence", 1.5, 1.4);
  CHECK(ce.code() == errc::convergence);
  CHECK(ce.last_iterate() == doctest::Approx(1.5));
  CHECK(ce.previous_iterate() == doctest::Approx(1.4));
}
