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

#include "counterex.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "box.hpp"
#include "bump.hpp"
#include "errors.hpp"
#include "fftp.hpp"
#include "fit.hpp"
#include "grid.hpp"

namespace latspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> default_knapp_eps() { return {0.2, 0.14, 0.1, 0.07, 0.05}; }

// sum_y <y>^{2/p} psi(h y)^2 over the integers; psi decays faster than any
// polynomial so the tail past the cached transform window is below 1e-15.
double sheared_axis_mass(double h, double p) {
  const BumpProfile& bump = shared_bump();
  const long y_max = static_cast<long>(std::ceil(bump.y_max() / h)) + 1;
  double acc = 0.0;
  for (long y = -y_max; y <= y_max; ++y) {
    const double ps = bump.psi(h * static_cast<double>(y));
    if (ps == 0.0) continue;
    const double w = std::pow(1.0 + static_cast<double>(y) * static_cast<double>(y), 1.0 / p);
    acc += w * ps * ps;
  }
  return acc;
}

}  // namespace

KnappReport knapp_family(int d, double p, std::vector<double> eps_list, long mesh_n,
                         double aperture) {
  if (d < 2) throw error(errc::invalid_argument, "knapp_family: dimension must be >= 2");
  if (d > kMaxSurfaceDim)
    throw error(errc::invalid_argument, "knapp_family: dimension exceeds the surface mesh limit");
  if (!(p >= 2.0)) throw error(errc::invalid_argument, "knapp_family: exponent p must be >= 2");
  if (mesh_n < 8) throw error(errc::invalid_argument, "knapp_family: mesh_n must be >= 8");
  if (eps_list.empty()) eps_list = default_knapp_eps();
  for (double e : eps_list)
    if (!(e > 0.0 && e <= 0.25))
      throw error(errc::invalid_argument, "knapp_family: eps values must lie in (0, 0.25]");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());

  const double mu = 2.0 * static_cast<double>(d);
  const int graph_axis = d - 1;
  const BumpProfile& bump = shared_bump();

  // One windowed patch per eps; the tangential window matches the support
  // of the eps-width cutoffs exactly.
  std::vector<SurfaceMesh> meshes;
  meshes.reserve(eps_list.size());
  for (double e : eps_list) {
    std::vector<double> lo(static_cast<size_t>(d - 1), 0.25 - e / 4.0);
    std::vector<double> hi(static_cast<size_t>(d - 1), 0.25 + e / 4.0);
    meshes.push_back(SurfaceMesh::patch(d, mu, graph_axis, lo, hi, mesh_n));
  }

  // Aperture: smallest a (with a 25% margin on 4x) keeping every cap node
  // inside the positivity region of the normal cutoff.
  if (aperture == 0.0) {
    double worst = 0.0;
    for (size_t i = 0; i < eps_list.size(); ++i) {
      const double e3 = eps_list[i] * eps_list[i] * eps_list[i];
      for (const SurfacePoint& q : meshes[i].points()) {
        if (std::abs(q.xi[graph_axis] - 0.25) >= 0.125) continue;  // far sheet
        worst = std::max(worst, std::abs(q.tau) / e3);
      }
    }
    aperture = 1.25 * 4.0 * worst;
    if (!(aperture > 0.0))
      throw error(errc::convergence, "knapp_family: aperture calibration found no cap nodes");
  }

  KnappReport rep;
  rep.d = d;
  rep.p = p;
  rep.aperture = aperture;
  rep.threshold_p = 2.0 * (static_cast<double>(d) + 2.0) / 3.0;
  rep.eps = eps_list;
  rep.expected_q = static_cast<double>(d) - 1.0;
  rep.expected_m = (static_cast<double>(d) + 2.0) * (1.0 - 2.0 / p);

  rep.tube_max = 0.0;
  rep.tube_ok = true;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const double e = eps_list[i];
    const double he = aperture * e * e * e;

    const auto ghat = [&](const SurfacePoint& q) {
      double val = BumpProfile::chi(q.tau / he);
      for (int j = 0; j + 1 < d; ++j) val *= BumpProfile::chi((q.xi[j] - 0.25) / e);
      return val;
    };

    // The family is only meaningful away from the critical set of h0.
    FrequencyCutoff cut;
    cut.fn = [&](const double* xi) {
      SurfacePoint q{};
      double tau = 0.0;
      for (int j = 0; j < d; ++j) {
        q.xi[j] = xi[j];
        tau += xi[j] - 0.25;
      }
      q.tau = tau;
      return ghat(q);
    };
    meshes[i].require_clear_of_critical(cut);

    double q_mass = 0.0;
    for (const SurfacePoint& q : meshes[i].points()) {
      const double g = ghat(q);
      if (g == 0.0) continue;
      q_mass += q.weight * g * g;
      const double reach = std::abs(q.tau) / he;
      rep.tube_max = std::max(rep.tube_max, reach);
      if (reach > 1.0) rep.tube_ok = false;
    }
    rep.surface_mass.push_back(q_mass);

    // Physical-space mass with the sheared product weight: exact tensor
    // product of one normal factor (scale a eps^3) and d-1 tangential
    // factors (scale eps), each (scale * psi(scale * y))^2 against <y>^{2/p}.
    const double m_mass = he * he * std::pow(e, 2.0 * (d - 1)) * sheared_axis_mass(he, p) *
                          std::pow(sheared_axis_mass(e, p), d - 1);
    rep.weighted_mass.push_back(m_mass);
    (void)bump;
  }

  const LineFit fq = fit_loglog(rep.eps, rep.surface_mass);
  const LineFit fm = fit_loglog(rep.eps, rep.weighted_mass);
  rep.slope_q = fq.slope;
  rep.residual_q = fq.residual;
  rep.slope_m = fm.slope;
  rep.residual_m = fm.residual;
  rep.verdict = (rep.slope_q - rep.slope_m < 0.0) ? "ratio_decays" : "ratio_grows";
  return rep;
}

namespace {

// Shared construction for both flat-band entry points: the cutoff-weighted
// surface amplitudes on the mu = 4 branch through (1/4, 1/4).
struct FlatbandNodes {
  std::vector<double> xi1, xi2, amp;  // amp = weight * chi2d(xi)
  double line_max_dev = 0.0;
  long active = 0;
};

FlatbandNodes flatband_nodes(double r, long mesh_n) {
  if (!(r > 0.0 && r < 0.25))
    throw error(errc::domain,
                "flat-band cutoff: need 0 < r < 1/4, otherwise the window touches the critical "
                "set of the symbol");
  const SurfaceMesh mesh =
      SurfaceMesh::patch(2, 4.0, /*graph_axis=*/0, {0.25 - r}, {0.25 + r}, mesh_n);

  // The window cutoff carries a Gaussian core on top of the compactly
  // supported profile: the core suppresses the support-edge saddle of the
  // transform, pushing the transverse tail below the reporting floor while
  // the product stays smooth and compactly supported inside the window.
  FrequencyCutoff cut;
  cut.fn = [r](const double* xi) {
    const double s1 = (xi[0] - 0.25) / r;
    const double s2 = (xi[1] - 0.25) / r;
    return std::exp(-4.0 * (s1 * s1 + s2 * s2)) *
           BumpProfile::chi((xi[0] - 0.25) / (4.0 * r)) *
           BumpProfile::chi((xi[1] - 0.25) / (4.0 * r));
  };
  mesh.require_clear_of_critical(cut);

  FlatbandNodes nodes;
  for (const SurfacePoint& q : mesh.points()) {
    const double c = cut(q.xi);
    if (c == 0.0) continue;
    nodes.xi1.push_back(q.xi[0]);
    nodes.xi2.push_back(q.xi[1]);
    nodes.amp.push_back(q.weight * c);
    nodes.line_max_dev = std::max(nodes.line_max_dev, std::abs(q.xi[0] + q.xi[1] - 0.5));
  }
  nodes.active = static_cast<long>(nodes.amp.size());
  if (nodes.active == 0)
    throw error(errc::convergence, "flat-band cutoff: no active quadrature nodes");
  return nodes;
}

std::complex<double> unit_phase(double arg) {
  return {std::cos(2.0 * kPi * arg), std::sin(2.0 * kPi * arg)};
}

}  // namespace

FlatbandReport flatband_kernel(double r, long box_radius, long mesh_n) {
  if (box_radius < 1) throw error(errc::invalid_argument, "flatband_kernel: radius must be >= 1");
  const FlatbandNodes nodes = flatband_nodes(r, mesh_n);

  FlatbandReport rep;
  rep.r = r;
  rep.mesh_points = nodes.active;
  rep.line_max_dev = nodes.line_max_dev;
  rep.box_radius = box_radius;

  // J(t) = sum amp e^{2 pi i xi1 t} for t in [-2R, 2R] (stored relative to
  // offset 2R), evaluated on the same nodes as the 2D kernel below.
  const long tspan = 2 * box_radius;
  std::vector<std::complex<double>> j_val(static_cast<size_t>(2 * tspan + 1));
  for (long t = -tspan; t <= tspan; ++t) {
    std::complex<double> acc = 0.0;
    for (size_t k = 0; k < nodes.amp.size(); ++k)
      acc += nodes.amp[k] * unit_phase(nodes.xi1[k] * static_cast<double>(t));
    j_val[static_cast<size_t>(t + tspan)] = acc;
  }
  for (long t = 0; t <= tspan; ++t)
    rep.j_abs.push_back(std::abs(j_val[static_cast<size_t>(t + tspan)]));

  double worst = 0.0;
  rep.diag_abs.assign(static_cast<size_t>(2 * box_radius + 1), 0.0);
  for (long x1 = -box_radius; x1 <= box_radius; ++x1) {
    for (long x2 = -box_radius; x2 <= box_radius; ++x2) {
      std::complex<double> iv = 0.0;
      for (size_t k = 0; k < nodes.amp.size(); ++k)
        iv += nodes.amp[k] * unit_phase(nodes.xi1[k] * static_cast<double>(x1) +
                                        nodes.xi2[k] * static_cast<double>(x2));
      if (x1 == x2) rep.diag_abs[static_cast<size_t>(x1 + box_radius)] = std::abs(iv);
      const std::complex<double> factored =
          unit_phase(0.25 * static_cast<double>(x2) * 2.0) *  // e^{i pi x2}
          j_val[static_cast<size_t>(x1 - x2 + tspan)];
      worst = std::max(worst, std::abs(iv - factored));
    }
  }
  rep.factorization_err = worst;
  return rep;
}

FlatbandBlowup flatband_weighted_blowup(double r, long s_max, long mesh_n) {
  if (s_max < 16) throw error(errc::invalid_argument, "flatband_weighted_blowup: s_max too small");
  const FlatbandNodes nodes = flatband_nodes(r, mesh_n);

  FlatbandBlowup rep;
  rep.r = r;

  std::complex<double> j0 = 0.0;
  for (size_t k = 0; k < nodes.amp.size(); ++k) j0 += nodes.amp[k];
  rep.j0_abs = std::abs(j0);

  // Diagonal profile of the weighted image of delta_0: on x = (s, s) the
  // kernel keeps constant modulus |J(0)| because xi1 + xi2 = 1/2 on every
  // node, so only the weight <(s,s)>^{-1/2} decays.
  double running = 0.0;
  long next_cut = 16;
  for (long s = 0; s <= s_max; ++s) {
    std::complex<double> iv = 0.0;
    for (size_t k = 0; k < nodes.amp.size(); ++k)
      iv += nodes.amp[k] * unit_phase((nodes.xi1[k] + nodes.xi2[k]) * static_cast<double>(s));
    const long xy[2] = {s, s};
    const double w = std::pow(LatticeBox::bracket(xy, 2), -0.5);
    const double val = w * std::abs(iv);
    if (s > 0) {
      rep.s.push_back(static_cast<double>(s));
      rep.profile.push_back(val);
    }
    running += (s == 0) ? val * val : 2.0 * val * val;  // +-s both contribute
    if (s == next_cut) {
      rep.cutoffs.push_back(static_cast<double>(s));
      rep.partial_l2.push_back(running);
      next_cut *= 2;
    }
  }

  const LineFit pf = fit_loglog(rep.s, rep.profile);
  rep.profile_slope = pf.slope;
  const LineFit lf = fit_semilogx(rep.cutoffs, rep.partial_l2);
  rep.log_slope = lf.slope;
  rep.residual = lf.residual;
  // Logarithmic growth of the partial sums: slope comparable to the
  // expected sqrt(2)|J(0)|^2 and a clean semilog fit.
  const double expect = std::sqrt(2.0) * rep.j0_abs * rep.j0_abs;
  rep.verdict = (rep.log_slope > 0.5 * expect && lf.residual < 0.1 * std::max(1e-300, rep.log_slope))
                    ? "l2_divergent"
                    : "l2_bounded";
  return rep;
}

namespace {

struct SiteData {
  std::vector<std::vector<long>> coord;  // per site
  std::vector<double> value;
};

SiteData unpack_real(const FiniteFunction& v, int d) {
  SiteData s;
  for (const auto& e : v) {
    if (static_cast<int>(e.first.size()) != d)
      throw error(errc::invalid_argument, "threshold form: site dimension mismatch");
    if (std::abs(e.second.imag()) > 0.0)
      throw error(errc::invalid_argument, "threshold form: test vector must be real");
    s.coord.push_back(e.first);
    s.value.push_back(e.second.real());
  }
  if (s.value.empty()) throw error(errc::invalid_argument, "threshold form: empty test vector");
  return s;
}

// One streaming pass over the n^d torus grid, accumulating the form for
// every mu at once: |vhat(k/n)|^2 / (h0(k/n) + mu^2) averaged over nodes.
// Real data gives the k -> -k symmetry, so only half the first axis runs.
std::vector<double> form_pass(int d, const SiteData& sd, long n,
                              const std::vector<double>& mu2) {
  const size_t ns = sd.value.size();
  const size_t nm = mu2.size();

  // Per-axis tables: symbol and per-site phases.
  std::vector<double> sym(static_cast<size_t>(n));
  for (long k = 0; k < n; ++k) {
    const double s = std::sin(kPi * static_cast<double>(k) / static_cast<double>(n));
    sym[static_cast<size_t>(k)] = 4.0 * s * s;
  }
  // phase[j][s * n + k] = e^{2 pi i x_{s,j} k / n}
  std::vector<std::vector<std::complex<double>>> phase(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    phase[static_cast<size_t>(j)].resize(ns * static_cast<size_t>(n));
    for (size_t s = 0; s < ns; ++s) {
      const double x = static_cast<double>(sd.coord[s][static_cast<size_t>(j)]);
      for (long k = 0; k < n; ++k)
        phase[static_cast<size_t>(j)][s * static_cast<size_t>(n) + static_cast<size_t>(k)] =
            unit_phase(x * static_cast<double>(k) / static_cast<double>(n));
    }
  }

  std::vector<double> acc(nm, 0.0);
  // Per-level carry buffers: carry[j][s] = value_s * phases through axis j.
  std::vector<std::vector<std::complex<double>>> carry(static_cast<size_t>(d),
                                                       std::vector<std::complex<double>>(ns));

  // Innermost axis: contract the deepest carry against the last phase table
  // and fold |vhat|^2 / (h0 + mu^2) into every accumulator.
  const auto inner_sweep = [&](const std::vector<std::complex<double>>& deep, double h_base,
                               double w0) {
    const std::complex<double>* ph = phase[static_cast<size_t>(d - 1)].data();
    for (long kd = 0; kd < n; ++kd) {
      std::complex<double> vh = 0.0;
      for (size_t s = 0; s < ns; ++s)
        vh += deep[s] * ph[s * static_cast<size_t>(n) + static_cast<size_t>(kd)];
      const double q = std::norm(vh);
      const double h = h_base + sym[static_cast<size_t>(kd)];
      for (size_t m = 0; m < nm; ++m) acc[m] += w0 * q / (h + mu2[m]);
    }
  };

  // Middle axes 1..d-2 by recursion; axis 0 runs over half the range
  // (real-data symmetry), axis d-1 inside inner_sweep.
  std::function<void(int, double, double)> descend = [&](int j, double h_base, double w0) {
    if (j == d - 1) {
      inner_sweep(carry[static_cast<size_t>(j - 1)], h_base, w0);
      return;
    }
    const std::complex<double>* ph = phase[static_cast<size_t>(j)].data();
    for (long k = 0; k < n; ++k) {
      for (size_t s = 0; s < ns; ++s)
        carry[static_cast<size_t>(j)][s] =
            carry[static_cast<size_t>(j - 1)][s] *
            ph[s * static_cast<size_t>(n) + static_cast<size_t>(k)];
      descend(j + 1, h_base + sym[static_cast<size_t>(k)], w0);
    }
  };

  const long half = n / 2;
  for (long k0 = 0; k0 <= half; ++k0) {
    const double w0 = (k0 == 0 || (n % 2 == 0 && k0 == half)) ? 1.0 : 2.0;
    if (d == 1) {
      std::complex<double> vh = 0.0;
      for (size_t s = 0; s < ns; ++s)
        vh += sd.value[s] * phase[0][s * static_cast<size_t>(n) + static_cast<size_t>(k0)];
      const double q = std::norm(vh);
      for (size_t m = 0; m < nm; ++m) acc[m] += w0 * q / (sym[static_cast<size_t>(k0)] + mu2[m]);
      continue;
    }
    for (size_t s = 0; s < ns; ++s)
      carry[0][s] = sd.value[s] * phase[0][s * static_cast<size_t>(n) + static_cast<size_t>(k0)];
    descend(1, sym[static_cast<size_t>(k0)], w0);
  }

  double vol = 1.0;
  for (int j = 0; j < d; ++j) vol *= static_cast<double>(n);
  for (double& a : acc) a /= vol;
  return acc;
}

}  // namespace

ThresholdDivergence threshold_divergence(int d, const FiniteFunction& v,
                                         std::vector<double> mu_list, long n_max,
                                         double rel_tol) {
  if (d < 1 || d > 4)
    throw error(errc::invalid_argument, "threshold_divergence: dimension must lie in [1, 4]");
  if (!(rel_tol > 0.0))
    throw error(errc::invalid_argument, "threshold_divergence: rel_tol must be > 0");
  const SiteData sd = unpack_real(v, d);
  if (mu_list.empty()) {
    if (d <= 2)
      mu_list = {1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3};
    else
      mu_list = {0.3, 0.1, 0.05};
  }
  for (double m : mu_list)
    if (!(m > 0.0)) throw error(errc::invalid_argument, "threshold_divergence: mu must be > 0");
  std::sort(mu_list.begin(), mu_list.end(), std::greater<double>());
  if (n_max == 0) n_max = (d <= 2) ? 16384 : 1024;

  ThresholdDivergence rep;
  rep.d = d;
  rep.mu = mu_list;
  const size_t nm = mu_list.size();
  std::vector<double> mu2(nm);
  for (size_t i = 0; i < nm; ++i) mu2[i] = mu_list[i] * mu_list[i];

  double vhat0 = 0.0;
  for (double val : sd.value) vhat0 += val;
  rep.expected_slope = vhat0 * vhat0 / (2.0 * kPi);

  rep.value.assign(nm, 0.0);
  rep.n_used.assign(nm, 0);
  rep.converged.assign(nm, false);

  std::vector<double> prev;
  for (long n = 128; n <= n_max; n *= 2) {
    const std::vector<double> cur = form_pass(d, sd, n, mu2);
    if (!prev.empty()) {
      for (size_t i = 0; i < nm; ++i) {
        if (rep.converged[i]) continue;
        rep.value[i] = cur[i];
        rep.n_used[i] = n;
        if (std::abs(cur[i] - prev[i]) <= rel_tol * std::abs(cur[i])) rep.converged[i] = true;
      }
    } else {
      for (size_t i = 0; i < nm; ++i) {
        rep.value[i] = cur[i];
        rep.n_used[i] = n;
      }
    }
    prev = cur;
    if (std::all_of(rep.converged.begin(), rep.converged.end(), [](bool b) { return b; })) break;
  }

  std::vector<double> xs, ys;
  for (size_t i = 0; i < nm; ++i) {
    if (!rep.converged[i]) continue;
    xs.push_back(std::log(1.0 / rep.mu[i]));
    ys.push_back(rep.value[i]);
  }
  if (xs.size() < 3)
    throw convergence_error("threshold_divergence: fewer than 3 mu points converged by n_max",
                            rep.value.back(), prev.empty() ? 0.0 : prev.back());
  const LineFit lf = fit_line(xs, ys);
  rep.fitted_slope = lf.slope;
  rep.residual = lf.residual;

  const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
  if (rep.fitted_slope > 0.05 * *mx && *mx > 1.5 * *mn)
    rep.verdict = "log_divergent";
  else if (*mx <= 1.25 * *mn)
    rep.verdict = "bounded";
  else
    rep.verdict = "inconclusive";
  return rep;
}

FiniteFunction half_density(const Potential& v) {
  if (!v.finite_support())
    throw error(errc::invalid_argument, "half_density: potential must have finite support");
  FiniteFunction out;
  for (const auto& site : v.support_sites()) {
    const double val = v.eval(site.data(), static_cast<int>(site.size()));
    if (val == 0.0) continue;
    out.emplace_back(site, std::sqrt(std::abs(val)));
  }
  return out;
}

SobolevProbe sobolev_probe(int d, std::vector<double> s_list, std::vector<long> n_list) {
  if (d < 1 || d > 3)
    throw error(errc::invalid_argument, "sobolev_probe: dimension must lie in [1, 3]");
  if (s_list.empty() || n_list.empty())
    throw error(errc::invalid_argument, "sobolev_probe: empty parameter list");
  for (long n : n_list)
    if (n < 8 || n % 2 != 0)
      throw error(errc::invalid_argument, "sobolev_probe: resolutions must be even and >= 8");
  std::sort(n_list.begin(), n_list.end());

  SobolevProbe rep;
  rep.d = d;
  rep.s_list = s_list;
  rep.n_list = n_list;
  rep.norm_sq.assign(s_list.size(), std::vector<double>(n_list.size(), 0.0));

  const double L = rep.box_size;
  const double sing = -(static_cast<double>(d) - 2.0) / 2.0;

  for (size_t ni = 0; ni < n_list.size(); ++ni) {
    const long N = n_list[ni];
    const double h = L / static_cast<double>(N);
    long total = 1;
    for (int j = 0; j < d; ++j) total *= N;

    // Cell-centered samples of chi(|x|/4) |x|^{sing}; centers avoid x = 0.
    std::vector<double> f(static_cast<size_t>(total));
    std::vector<long> ix(static_cast<size_t>(d), 0);
    for (long idx = 0; idx < total; ++idx) {
      double r2 = 0.0;
      for (int j = 0; j < d; ++j) {
        const double x = -L / 2.0 + (static_cast<double>(ix[static_cast<size_t>(j)]) + 0.5) * h;
        r2 += x * x;
      }
      const double r = std::sqrt(r2);
      const double c = BumpProfile::chi(r / 4.0);
      f[static_cast<size_t>(idx)] = (c == 0.0) ? 0.0 : c * std::pow(r, sing);
      for (int j = d - 1; j >= 0; --j) {
        if (++ix[static_cast<size_t>(j)] < N) break;
        ix[static_cast<size_t>(j)] = 0;
      }
    }

    std::vector<long> dims(static_cast<size_t>(d), N);
    std::vector<std::complex<double>> hat;
    fft_r2c(dims, f, hat);
    f.clear();
    f.shrink_to_fit();

    // Accumulate sum over the full spectrum using Hermitian symmetry of the
    // packed last axis: interior columns count twice.
    const long last = N / 2 + 1;
    long rows = 1;
    for (int j = 0; j + 1 < d; ++j) rows *= N;
    std::vector<long> im(static_cast<size_t>(d), 0);
    const double norm_fac = std::pow(h, 2.0 * d) / std::pow(L, d);  // h^{2d} L^{-d}
    std::vector<double> acc(s_list.size(), 0.0);
    for (long rowi = 0; rowi < rows; ++rowi) {
      double base = 0.0;
      for (int j = 0; j + 1 < d; ++j) {
        long m = im[static_cast<size_t>(j)];
        if (m > N / 2) m -= N;
        const double w = 2.0 * kPi * static_cast<double>(m) / L;
        base += w * w;
      }
      const size_t row_off = static_cast<size_t>(rowi) * static_cast<size_t>(last);
      for (long mcol = 0; mcol < last; ++mcol) {
        const double w = 2.0 * kPi * static_cast<double>(mcol) / L;
        const double omega2 = base + w * w;
        const double mag2 = std::norm(hat[row_off + static_cast<size_t>(mcol)]);
        const double mult = (mcol == 0 || mcol == N / 2) ? 1.0 : 2.0;
        for (size_t si = 0; si < s_list.size(); ++si) {
          const double s = s_list[si];
          double wgt;
          if (s == 1.0)
            wgt = 1.0 + omega2;
          else if (s == 0.5)
            wgt = std::sqrt(1.0 + omega2);
          else
            wgt = std::pow(1.0 + omega2, s);
          acc[si] += mult * wgt * mag2;
        }
      }
      for (int j = d - 2; j >= 0; --j) {
        if (++im[static_cast<size_t>(j)] < N) break;
        im[static_cast<size_t>(j)] = 0;
      }
    }
    for (size_t si = 0; si < s_list.size(); ++si) rep.norm_sq[si][ni] = norm_fac * acc[si];
  }

  rep.growth_pct.assign(s_list.size(), {});
  for (size_t si = 0; si < s_list.size(); ++si)
    for (size_t ni = 0; ni + 1 < n_list.size(); ++ni)
      rep.growth_pct[si].push_back(
          100.0 * (rep.norm_sq[si][ni + 1] / rep.norm_sq[si][ni] - 1.0));
  return rep;
}

namespace {

// Midpoint quadrature of the radial form, split at r0 ~ sqrt(eps) with a
// logarithmic substitution on the outer piece; node count doubles until
// the value stabilizes.
double ultra_value(double eps, double inner_cut) {
  const double rmax2 = (1.0 / 16.0 - eps) / 2.0;
  if (!(rmax2 > 0.0)) return 0.0;
  const double rmax = std::sqrt(rmax2);

  const auto integrand = [&](double r) {
    const double u = std::sqrt(2.0 * r * r + eps);
    const double c = BumpProfile::chi(u);
    if (c == 0.0) return 0.0;
    double cut = 1.0;
    if (inner_cut > 0.0) cut = 1.0 - BumpProfile::chi(r / (4.0 * inner_cut));
    return 2.0 * kPi * r * c * c * cut / (std::sqrt(r * r + eps) * u);
  };

  const double r0 = std::min(std::sqrt(eps), rmax);
  const auto evaluate = [&](long m) {
    double acc = 0.0;
    // Inner piece [0, r0], plain midpoint.
    const double h1 = r0 / static_cast<double>(m);
    for (long i = 0; i < m; ++i) acc += integrand((static_cast<double>(i) + 0.5) * h1) * h1;
    // Outer piece [r0, rmax] in u = ln r.
    if (rmax > r0) {
      const double a = std::log(r0), b = std::log(rmax);
      const double h2 = (b - a) / static_cast<double>(m);
      for (long i = 0; i < m; ++i) {
        const double r = std::exp(a + (static_cast<double>(i) + 0.5) * h2);
        acc += integrand(r) * r * h2;
      }
    }
    return acc;
  };

  long m = 256;
  double prev = evaluate(m);
  for (int it = 0; it < 12; ++it) {
    m *= 2;
    const double cur = evaluate(m);
    if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw convergence_error("ultra_surface_form: radial quadrature failed to stabilize", prev, prev);
}

}  // namespace

UltraSurfaceForm ultra_surface_form(std::vector<double> eps_list, double inner_cut) {
  if (eps_list.empty())
    eps_list = {1e-2, 3.1622776601683795e-3, 1e-3, 3.1622776601683796e-4, 1e-4,
                3.162277660168379e-5, 1e-5};
  for (double e : eps_list)
    if (!(e > 0.0 && e < 1.0 / 16.0))
      throw error(errc::invalid_argument,
                  "ultra_surface_form: eps must lie in (0, 1/16) so the profile has support");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<double>());

  UltraSurfaceForm rep;
  rep.eps = eps_list;
  rep.inner_cut = inner_cut;
  const double chi0 = BumpProfile::chi(0.0);
  rep.analytic_slope = kPi / std::sqrt(2.0) * chi0 * chi0;

  std::vector<double> xs;
  for (double e : eps_list) {
    rep.value.push_back(ultra_value(e, inner_cut));
    xs.push_back(std::log(1.0 / e));
  }
  const LineFit lf = fit_line(xs, rep.value);
  rep.fitted_slope = lf.slope;
  rep.residual = lf.residual;

  const auto [mn, mx] = std::minmax_element(rep.value.begin(), rep.value.end());
  if (rep.fitted_slope > 0.5 * rep.analytic_slope)
    rep.verdict = "log_divergent";
  else if (*mx <= 1.2 * std::max(*mn, 1e-300))
    rep.verdict = "bounded";
  else
    rep.verdict = "inconclusive";
  return rep;
}

}  // namespace latspec
