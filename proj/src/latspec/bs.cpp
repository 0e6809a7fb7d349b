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

#include "bs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fit.hpp"
#include "resolvent.hpp"

namespace latspec {

namespace {

// Decay exponent of the weight |V|^{1/2} along its slowest direction;
// infinity for exactly supported potentials.
double weight_decay_exponent(const Potential& v) {
  switch (v.kind) {
    case Potential::Kind::power_decay:
      return v.alpha / 2.0;
    case Potential::Kind::anisotropic_weight:
      return 1.0 / (2.0 * v.p);
    case Potential::Kind::flat_band_weight:
      return 0.25;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

// Exact Birman-Schwinger matrix over the support sites of a finite V.
BsNormResult finite_support_norm(const Potential& v, int d, cplx z, const BsOptions& opts) {
  const auto sites = v.support_sites();
  const long k = static_cast<long>(sites.size());
  if (k == 0) return {};

  std::vector<double> w(k);
  for (long i = 0; i < k; ++i) w[i] = std::sqrt(std::abs(v.eval(sites[i].data(), d)));

  const long disp_radius = 2 * v.support_radius();
  const long n = opts.grid_n > 0 ? opts.grid_n : admissible_grid_n(d, z, disp_radius);

  long nodes = 1;
  bool fits_budget = true;
  for (int j = 0; j < d; ++j) {
    if (nodes > TorusGrid::kMaxNodes / n) {
      fits_budget = false;
      break;
    }
    nodes *= n;
  }

  std::vector<cplx> a(k * k);
  if (fits_budget) {
    const KernelTable kt = free_kernel(d, z, disp_radius, TorusGrid(d, n));
    std::vector<long> delta(d);
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < k; ++j) {
        for (int c = 0; c < d; ++c) delta[c] = sites[i][c] - sites[j][c];
        a[i * k + j] = w[i] * kt.value(delta.data()) * w[j];
      }
  } else {
    // Grid too large to materialize: stream each distinct displacement.
    std::map<std::vector<long>, cplx> memo;
    std::vector<long> delta(d);
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < k; ++j) {
        for (int c = 0; c < d; ++c) delta[c] = sites[i][c] - sites[j][c];
        auto it = memo.find(delta);
        if (it == memo.end()) it = memo.emplace(delta, green_direct(d, z, delta.data(), n)).first;
        a[i * k + j] = w[i] * it->second * w[j];
      }
  }

  DenseOp op(k, std::move(a));
  NormOptions nopts;
  nopts.rel_tol = opts.rel_tol;
  nopts.max_iter = opts.max_iter;
  return {top_singular_value(op, nopts), 0.0};
}

std::string potential_label(const Potential& v) {
  std::string s = v.kind_name();
  if (v.kind == Potential::Kind::power_decay)
    s += " alpha=" + std::to_string(v.alpha);
  else if (v.kind == Potential::Kind::anisotropic_weight)
    s += " p=" + std::to_string(v.p);
  return s;
}

}  // namespace

BsNormResult bs_norm(const Potential& v, int d, cplx z, const BsOptions& opts,
                     std::vector<cplx>* warm) {
  if (v.finite_support()) return finite_support_norm(v, d, z, opts);

  if (opts.box_radius < 1) throw error(errc::invalid_argument, "bs_norm: box radius required");
  LatticeBox box(d, opts.box_radius);
  std::vector<double> w = sample_abs(v, box);
  double wmax = 0.0;
  for (auto& x : w) {
    x = std::sqrt(x);
    wmax = std::max(wmax, x);
  }

  BoxMultiplierOp op(d, opts.box_radius, w, w, resolvent_multiplier(d, z), opts.embed_n);
  NormOptions nopts;
  nopts.rel_tol = opts.rel_tol;
  nopts.max_iter = opts.max_iter;
  if (warm && static_cast<long>(warm->size()) == op.dim()) nopts.warm_start = warm;
  const double value = top_singular_value(op, nopts, warm);

  const double q = weight_decay_exponent(v);
  const double tail =
      2.0 * std::pow(1.0 + static_cast<double>(opts.box_radius), -q) * op.kernel_l1() * wmax;
  return {value, tail};
}

std::vector<double> default_mu_grid(int d) {
  std::vector<double> mu;
  for (long m = -1; m <= 4 * d + 1; ++m) mu.push_back(static_cast<double>(m));
  for (int k = 0; k <= d; ++k) {
    mu.push_back(4.0 * k - 0.5);
    mu.push_back(4.0 * k + 0.5);
  }
  std::sort(mu.begin(), mu.end());
  mu.erase(std::unique(mu.begin(), mu.end()), mu.end());
  return mu;
}

std::vector<double> default_eps_ladder() {
  std::vector<double> eps;
  for (int i = 0; i < 5; ++i) eps.push_back(std::pow(10.0, -1.0 - 0.5 * i));
  return eps;
}

SweepReport bs_sup_sweep(const Potential& v, int d, const SweepOptions& opts) {
  SweepReport rep;
  rep.d = d;
  rep.box_radius = opts.box_radius;
  rep.potential = potential_label(v);
  rep.mu_grid = opts.mu_grid.empty() ? default_mu_grid(d) : opts.mu_grid;
  rep.eps_ladder = opts.eps_ladder.empty() ? default_eps_ladder() : opts.eps_ladder;
  if (rep.eps_ladder.empty() || rep.mu_grid.empty())
    throw error(errc::invalid_argument, "bs_sup_sweep: empty grid");
  for (double e : rep.eps_ladder)
    if (e <= 0.0) throw error(errc::invalid_argument, "bs_sup_sweep: eps must be positive");

  const bool finite = v.finite_support();
  std::unique_ptr<BoxMultiplierOp> op;
  std::vector<double> weights;
  if (!finite) {
    LatticeBox box(d, opts.box_radius);
    weights = sample_abs(v, box);
    for (auto& x : weights) x = std::sqrt(x);
    op = std::make_unique<BoxMultiplierOp>(d, opts.box_radius, weights, weights,
                                           resolvent_multiplier(d, cplx(0.0, 1.0)),
                                           opts.embed_n);
  }

  NormOptions nopts;
  nopts.rel_tol = opts.rel_tol;
  nopts.max_iter = opts.max_iter;
  std::vector<cplx> warm;

  rep.sup_norm = 0.0;
  rep.tail_bound = 0.0;
  for (double mu : rep.mu_grid) {
    std::vector<double> norms;
    for (double eps : rep.eps_ladder) {
      const cplx z(mu, eps);
      double value;
      if (finite) {
        BsOptions bopts;
        bopts.rel_tol = opts.rel_tol;
        bopts.max_iter = opts.max_iter;
        value = bs_norm(v, d, z, bopts).value;
      } else {
        op->set_multiplier(resolvent_multiplier(d, z));
        if (!warm.empty()) nopts.warm_start = &warm;
        value = top_singular_value(*op, nopts, &warm);
      }
      norms.push_back(value);
      rep.points.push_back({mu, eps, value});
      rep.sup_norm = std::max(rep.sup_norm, value);
    }
    MuFit f;
    f.mu = mu;
    const auto fit = fit_loglog(rep.eps_ladder, norms);
    f.slope = fit.slope;
    f.residual = fit.residual;
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    f.ratio = (*lo > 0.0) ? *hi / *lo : std::numeric_limits<double>::infinity();
    rep.fits.push_back(f);
  }

  if (op) {
    const double q = weight_decay_exponent(v);
    double wmax = 0.0;
    for (double x : weights) wmax = std::max(wmax, x);
    // Kernel l1 grows toward the axis; the last multiplier set is the
    // smallest eps, which dominates the tail estimate.
    rep.tail_bound =
        2.0 * std::pow(1.0 + static_cast<double>(opts.box_radius), -q) * op->kernel_l1() * wmax;
  }

  bool divergent = false;
  bool bounded = true;
  for (const auto& f : rep.fits) {
    if (f.slope < -0.2 && f.residual < 0.1) divergent = true;
    if (!(f.ratio <= 2.0)) bounded = false;
  }
  rep.verdict = divergent ? "divergent" : (bounded ? "bounded" : "inconclusive");
  return rep;
}

double weak_coupling_margin(const SweepReport& report) {
  if (report.verdict != "bounded")
    throw error(errc::domain, "weak_coupling_margin: no uniform margin exists (verdict " +
                                  report.verdict + ")");
  if (report.sup_norm <= 0.0)
    throw error(errc::domain, "weak_coupling_margin: sweep recorded no positive norm");
  return 1.0 / report.sup_norm;
}

double bs_bound_state_energy(const Potential& v, int d, double lambda, double e_lo, double e_hi,
                             double tol) {
  if (!v.finite_support())
    throw error(errc::invalid_argument, "bs_bound_state_energy: finite support required");
  if (lambda <= 0.0) throw error(errc::invalid_argument, "bs_bound_state_energy: lambda > 0");
  if (!(e_lo < e_hi) || e_hi >= 0.0)
    throw error(errc::invalid_argument, "bs_bound_state_energy: bracket must lie below 0");

  BsOptions opts;
  auto g = [&](double e) { return lambda * bs_norm(v, d, cplx(e, 0.0), opts).value - 1.0; };
  double lo = e_lo, hi = e_hi;
  double glo = g(lo), ghi = g(hi);
  if (glo * ghi > 0.0)
    throw error(errc::domain, "bs_bound_state_energy: bracket does not straddle the root");
  // The norm decreases as e moves away from the band, so g is monotone.
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (gm * glo < 0.0) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace latspec
