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

#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "fftp.hpp"
#include "fit.hpp"
#include "gridop.hpp"
#include "lorentz.hpp"

namespace latspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// h0 restricted to one axis of an n-point ring: 4 sin^2(pi m / n).
std::vector<double> ring_symbol(long n) {
  std::vector<double> h(static_cast<size_t>(n));
  for (long m = 0; m < n; ++m) {
    const double s = std::sin(kPi * static_cast<double>(m) / static_cast<double>(n));
    h[static_cast<size_t>(m)] = 4.0 * s * s;
  }
  return h;
}

long ring_for_horizon(double t_max) {
  const long need = static_cast<long>(std::ceil(4.0 * kPi * t_max)) + 2;
  return next_fft_size(std::max(need, 64L));
}

// Evolves delta_0 on a ring, reusing one plan across times.
class RingEvolver {
 public:
  explicit RingEvolver(long n) : n_(n), h_(ring_symbol(n)), buf_(static_cast<size_t>(n)) {
    plan_ = std::make_unique<FftPlan>(std::vector<long>{n}, buf_.data(), +1);
  }

  // |u(t,x)| for u0 = delta_0; also reports the l2 norm (unitarity probe).
  void evolve_abs(double t, std::vector<double>& abs_out, double* l2 = nullptr) {
    for (long m = 0; m < n_; ++m) {
      const double ph = -t * h_[static_cast<size_t>(m)];
      buf_[static_cast<size_t>(m)] = std::complex<double>(std::cos(ph), std::sin(ph));
    }
    plan_->execute();
    abs_out.resize(static_cast<size_t>(n_));
    const double scale = 1.0 / static_cast<double>(n_);
    double sq = 0.0;
    for (long m = 0; m < n_; ++m) {
      const double a = std::abs(buf_[static_cast<size_t>(m)]) * scale;
      abs_out[static_cast<size_t>(m)] = a;
      sq += a * a;
    }
    if (l2 != nullptr) *l2 = std::sqrt(sq);
  }

  long size() const { return n_; }

 private:
  long n_;
  std::vector<double> h_;
  std::vector<std::complex<double>> buf_;
  std::unique_ptr<FftPlan> plan_;
};

// Time quadrature nodes on [0, T]: uniform at 512 points per unit up to
// t = 1 (where the Lorentz norm of the snapshot varies fastest), then
// geometrically coarsened steps.
std::vector<double> time_grid(double T) {
  std::vector<double> t;
  t.push_back(0.0);
  double dt = 1.0 / 512.0;
  double cur = 0.0;
  while (cur < T) {
    if (cur >= 1.0) dt = std::min(dt * 1.06, std::max(1.0, T / 32.0));
    cur = std::min(cur + dt, T);
    t.push_back(cur);
  }
  return t;
}

double pstar_exponent(int d) {
  if (d < 4)
    throw error(errc::domain,
                "strichartz norm: the endpoint exponent 2d/(d-3) requires dimension >= 4");
  return 2.0 * static_cast<double>(d) / (static_cast<double>(d) - 3.0);
}

// log2(bin ratio) = 1/64: fine enough that snapping values to bin centers
// moves the norm by well under one percent.
constexpr double kLnBinRatio = 0.6931471805599453 / 64.0;

}  // namespace

double revival_horizon(long radius) {
  return static_cast<double>(2 * radius + 1) / (4.0 * kPi);
}

std::vector<cplx> propagate(const LatticeBox& box, const std::vector<cplx>& u0, double t) {
  if (box.boundary() != Boundary::periodic)
    throw error(errc::invalid_argument, "propagate: box must be periodic");
  if (u0.size() != static_cast<size_t>(box.site_count()))
    throw error(errc::invalid_argument, "propagate: data size does not match box");
  if (std::abs(t) > revival_horizon(box.radius())) {
    const long need =
        static_cast<long>(std::ceil((4.0 * kPi * std::abs(t) - 1.0) / 2.0)) + 1;
    throw resolution_error(
        "propagate: time " + std::to_string(t) + " lies beyond the revival horizon " +
            std::to_string(revival_horizon(box.radius())) + "; radius >= " +
            std::to_string(need) + " required",
        need);
  }

  const int d = box.dim();
  const long L = box.side();
  const std::vector<double> axis = ring_symbol(L);

  std::vector<cplx> buf = u0;
  std::vector<long> dims(static_cast<size_t>(d), L);
  fft_inplace(dims, buf, -1);

  // Phase multiplication, odometer over the frequency box.
  std::vector<long> m(static_cast<size_t>(d), 0);
  const long n = box.site_count();
  for (long idx = 0; idx < n; ++idx) {
    double h = 0.0;
    for (int j = 0; j < d; ++j) h += axis[static_cast<size_t>(m[static_cast<size_t>(j)])];
    const double ph = -t * h;
    buf[static_cast<size_t>(idx)] *= cplx(std::cos(ph), std::sin(ph));
    for (int j = d - 1; j >= 0; --j) {
      if (++m[static_cast<size_t>(j)] < L) break;
      m[static_cast<size_t>(j)] = 0;
    }
  }

  fft_inplace(dims, buf, +1);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : buf) v *= scale;
  return buf;
}

DispersiveFit dispersive_fit(int d, double t_min, double t_max, int samples, long ring_n) {
  if (d < 1) throw error(errc::invalid_argument, "dispersive_fit: dimension must be >= 1");
  if (!(0.0 < t_min && t_min < t_max))
    throw error(errc::invalid_argument, "dispersive_fit: need 0 < t_min < t_max");
  if (samples < 2) throw error(errc::invalid_argument, "dispersive_fit: need >= 2 samples");
  if (ring_n == 0) ring_n = ring_for_horizon(t_max);
  if (static_cast<double>(ring_n) < 4.0 * kPi * t_max)
    throw resolution_error("dispersive_fit: ring holds the packet only up to n/(4 pi); need n >= " +
                               std::to_string(static_cast<long>(std::ceil(4.0 * kPi * t_max))),
                           static_cast<long>(std::ceil(4.0 * kPi * t_max)));

  RingEvolver ring(ring_n);
  DispersiveFit out;
  out.d = d;
  out.ring_n = ring_n;

  std::vector<double> abs1;
  const double lr = std::log(t_max / t_min);
  for (int i = 0; i < samples; ++i) {
    const double t = t_min * std::exp(lr * static_cast<double>(i) / (samples - 1));
    double l2 = 0.0;
    ring.evolve_abs(t, abs1, &l2);
    const double sup1 = *std::max_element(abs1.begin(), abs1.end());
    // The point initial state factorizes across axes, so both norms tensor.
    const double sup_d = std::pow(sup1, d);
    out.t.push_back(t);
    out.sup_norm.push_back(sup_d);
    out.l2_norm.push_back(std::pow(l2, d));
    out.envelope_sup =
        std::max(out.envelope_sup, sup_d * std::pow(1.0 + t * t, static_cast<double>(d) / 6.0));
  }

  const LineFit fit = fit_loglog(out.t, out.sup_norm);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.residual = fit.residual;
  out.inconclusive = fit.residual > 0.15;
  return out;
}

double strichartz_norm(const LatticeBox& box, const std::vector<cplx>& u0, double T) {
  const double p = pstar_exponent(box.dim());
  if (box.boundary() != Boundary::periodic)
    throw error(errc::invalid_argument, "strichartz_norm: box must be periodic");
  if (u0.size() != static_cast<size_t>(box.site_count()))
    throw error(errc::invalid_argument, "strichartz_norm: data size does not match box");
  if (!(T > 0.0)) throw error(errc::invalid_argument, "strichartz_norm: T must be > 0");
  if (T > revival_horizon(box.radius()))
    throw resolution_error(
        "strichartz_norm: T beyond the revival horizon; radius >= " +
            std::to_string(static_cast<long>(std::ceil((4.0 * kPi * T - 1.0) / 2.0)) + 1) +
            " required",
        static_cast<long>(std::ceil((4.0 * kPi * T - 1.0) / 2.0)) + 1);

  const int d = box.dim();
  const long L = box.side();
  const long n = box.site_count();
  const std::vector<long> dims(static_cast<size_t>(d), L);

  // Frequency-side data and per-node symbol, computed once.
  std::vector<cplx> hat = u0;
  fft_inplace(dims, hat, -1);
  const std::vector<double> axis = ring_symbol(L);
  std::vector<double> sym(static_cast<size_t>(n));
  {
    std::vector<long> m(static_cast<size_t>(d), 0);
    for (long idx = 0; idx < n; ++idx) {
      double h = 0.0;
      for (int j = 0; j < d; ++j) h += axis[static_cast<size_t>(m[static_cast<size_t>(j)])];
      sym[static_cast<size_t>(idx)] = h;
      for (int j = d - 1; j >= 0; --j) {
        if (++m[static_cast<size_t>(j)] < L) break;
        m[static_cast<size_t>(j)] = 0;
      }
    }
  }

  std::vector<cplx> buf(static_cast<size_t>(n));
  FftPlan back(dims, buf.data(), +1);
  std::vector<double> vals(static_cast<size_t>(n));
  const double scale = 1.0 / static_cast<double>(n);

  const auto snapshot_sq = [&](double t) {
    for (long i = 0; i < n; ++i) {
      const double ph = -t * sym[static_cast<size_t>(i)];
      buf[static_cast<size_t>(i)] = hat[static_cast<size_t>(i)] * cplx(std::cos(ph), std::sin(ph));
    }
    back.execute();
    for (long i = 0; i < n; ++i) vals[static_cast<size_t>(i)] = std::abs(buf[static_cast<size_t>(i)]) * scale;
    const double nrm = lorentz_norm(vals, p, 2.0);
    return nrm * nrm;
  };

  const std::vector<double> grid = time_grid(T);
  double acc = 0.0;
  double prev = snapshot_sq(0.0) + snapshot_sq(-0.0);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double cur = snapshot_sq(grid[i]) + snapshot_sq(-grid[i]);
    acc += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
    prev = cur;
  }
  return std::sqrt(acc);
}

namespace {

// l^{p,2} norm of the d-fold tensor power of a 1D absolute-value table.
// Per-axis values are binned on a logarithmic grid; the distribution of the
// product state is the d-fold convolution of the bin histograms, done in
// one FFT pass. Bin-center snapping is the only approximation.
double tensor_power_lorentz(const std::vector<double>& abs1, int d, double p) {
  const double vmax = *std::max_element(abs1.begin(), abs1.end());
  if (!(vmax > 0.0)) return 0.0;

  const int B = static_cast<int>(std::ceil(12.0 * std::log(10.0) / kLnBinRatio));
  std::vector<double> h(static_cast<size_t>(B + 1), 0.0);
  for (double v : abs1) {
    if (!(v > 0.0)) continue;
    const double rel = std::log(v / vmax) / kLnBinRatio;  // <= 0
    const long idx = static_cast<long>(std::floor(rel));
    if (idx < -B) continue;  // below vmax * 1e-12: irrelevant to the norm
    h[static_cast<size_t>(idx + B)] += 1.0;
  }

  const long M = next_fft_size(static_cast<long>(d) * (B + 1) + 1);
  std::vector<std::complex<double>> c(static_cast<size_t>(M), 0.0);
  for (int i = 0; i <= B; ++i) c[static_cast<size_t>(i)] = h[static_cast<size_t>(i)];
  fft_inplace({M}, c, -1);
  for (auto& z : c) {
    std::complex<double> w = z;
    for (int j = 1; j < d; ++j) w *= z;
    z = w;
  }
  fft_inplace({M}, c, +1);

  std::vector<std::pair<double, double>> hist;
  hist.reserve(static_cast<size_t>(d) * (B + 1));
  // Convolution index j corresponds to per-axis bin indices summing to j,
  // i.e. a product value near vmax^d * ratio^{j - dB + d/2}.
  for (long j = 0; j <= static_cast<long>(d) * B; ++j) {
    const double cnt = c[static_cast<size_t>(j)].real() / static_cast<double>(M);
    if (cnt < 1e-9) continue;
    const double value =
        std::exp(static_cast<double>(d) * std::log(vmax) +
                 kLnBinRatio * (static_cast<double>(j - static_cast<long>(d) * B) +
                                0.5 * static_cast<double>(d)));
    hist.emplace_back(value, cnt);
  }
  return lorentz_norm_weighted(std::move(hist), p, 2.0);
}

}  // namespace

double strichartz_norm_point(int d, double T, long ring_n) {
  const double p = pstar_exponent(d);
  if (!(T > 0.0)) throw error(errc::invalid_argument, "strichartz_norm_point: T must be > 0");
  if (ring_n == 0) ring_n = ring_for_horizon(T);
  if (static_cast<double>(ring_n) < 4.0 * kPi * T)
    throw resolution_error(
        "strichartz_norm_point: ring holds the packet only up to n/(4 pi); need n >= " +
            std::to_string(static_cast<long>(std::ceil(4.0 * kPi * T))),
        static_cast<long>(std::ceil(4.0 * kPi * T)));

  RingEvolver ring(ring_n);
  std::vector<double> abs1;

  // For the point state |u(-t)| is a reflection of |u(t)|, so the two time
  // half-axes contribute equally.
  const auto snapshot_sq = [&](double t) {
    ring.evolve_abs(t, abs1);
    const double nrm = tensor_power_lorentz(abs1, d, p);
    return 2.0 * nrm * nrm;
  };

  const std::vector<double> grid = time_grid(T);
  double acc = 0.0;
  double prev = snapshot_sq(0.0);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double cur = snapshot_sq(grid[i]);
    acc += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
    prev = cur;
  }
  return std::sqrt(acc);
}

std::vector<cplx> duhamel_propagate(const LatticeBox& box, const std::vector<cplx>& u0,
                                    const std::function<std::vector<cplx>(double)>& forcing,
                                    double T, long steps) {
  if (!(T >= 0.0)) throw error(errc::invalid_argument, "duhamel_propagate: T must be >= 0");
  if (steps < 1) throw error(errc::invalid_argument, "duhamel_propagate: steps must be >= 1");
  if (!forcing) throw error(errc::invalid_argument, "duhamel_propagate: missing forcing");

  std::vector<cplx> u = propagate(box, u0, T);
  const double dt = T / static_cast<double>(steps);
  const size_t n = u.size();
  for (long k = 0; k <= steps; ++k) {
    const double s = dt * static_cast<double>(k);
    const double w = (k == 0 || k == steps) ? 0.5 * dt : dt;
    std::vector<cplx> f = forcing(s);
    if (f.size() != n)
      throw error(errc::invalid_argument, "duhamel_propagate: forcing size does not match box");
    const std::vector<cplx> flown = propagate(box, f, T - s);
    const cplx coef = cplx(0.0, -1.0) * w;
    for (size_t i = 0; i < n; ++i) u[i] += coef * flown[i];
  }
  return u;
}

ContinuumDispersive continuum_dispersive(int d, int k, double t, long grid_n) {
  if (d < 1) throw error(errc::invalid_argument, "continuum_dispersive: dimension must be >= 1");
  if (k < 0 || k > d)
    throw error(errc::invalid_argument, "continuum_dispersive: signature k must lie in [0, d]");

  // The Gaussian spreads ballistically: the phase 4 pi^2 t xi^2 transports
  // frequency xi to x = -4 pi t xi, and e^{-pi xi^2} is negligible past
  // |xi| = 3. Sample at least 6 points per unit so the Nyquist band covers
  // that range.
  const double X = 20.0 + 14.0 * kPi * std::abs(t);
  const long need = static_cast<long>(std::ceil(6.0 * X));
  if (grid_n == 0) grid_n = next_fft_size(need);
  if (grid_n < need)
    throw resolution_error("continuum_dispersive: grid too coarse for the chirp at t = " +
                               std::to_string(t) + "; need n >= " + std::to_string(need),
                           need);

  const double dx = X / static_cast<double>(grid_n);
  const auto axis_sup = [&](double sign) {
    std::vector<std::complex<double>> buf(static_cast<size_t>(grid_n));
    for (long i = 0; i < grid_n; ++i) {
      const double x = (i <= grid_n / 2 ? static_cast<double>(i)
                                        : static_cast<double>(i - grid_n)) *
                       dx;
      buf[static_cast<size_t>(i)] = std::exp(-kPi * x * x);
    }
    fft_inplace({grid_n}, buf, -1);
    for (long m = 0; m < grid_n; ++m) {
      const double xi = (m <= grid_n / 2 ? static_cast<double>(m)
                                         : static_cast<double>(m - grid_n)) /
                        X;
      const double ph = 4.0 * kPi * kPi * t * sign * xi * xi;
      buf[static_cast<size_t>(m)] *= std::complex<double>(std::cos(ph), std::sin(ph));
    }
    fft_inplace({grid_n}, buf, +1);
    double sup = 0.0;
    for (const auto& z : buf) sup = std::max(sup, std::abs(z));
    return sup / static_cast<double>(grid_n);
  };

  ContinuumDispersive out;
  out.t = t;
  const double sp = (k > 0) ? axis_sup(+1.0) : 1.0;
  const double sm = (k < d) ? axis_sup(-1.0) : 1.0;
  out.sup = std::pow(sp, k) * std::pow(sm, d - k);
  out.closed_form = std::pow(1.0 + 16.0 * kPi * kPi * t * t, -static_cast<double>(d) / 4.0);
  out.envelope = (t == 0.0) ? std::numeric_limits<double>::infinity()
                            : std::pow(4.0 * kPi * std::abs(t), -static_cast<double>(d) / 2.0);
  return out;
}

}  // namespace latspec
