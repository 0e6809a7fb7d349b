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

#include "gridop.hpp"

#include <cmath>
#include <numbers>

#include "resolvent.hpp"

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;

bool smooth_even(long n) {
  if (n < 2 || n % 2 != 0) return false;
  for (long f : {2L, 3L, 5L, 7L})
    while (n % f == 0) n /= f;
  return n == 1;
}

}  // namespace

long next_fft_size(long need) {
  long n = std::max(need, 2L);
  while (!smooth_even(n)) ++n;
  return n;
}

MultiplierFn resolvent_multiplier(int d, cplx z) {
  if (band_distance(d, z) <= 0.0)
    throw error(errc::domain, "resolvent multiplier: z lies on the spectrum");
  return [z](double h) { return 1.0 / (cplx(h, 0.0) - z); };
}

MultiplierFn resolvent_diff_multiplier(int d, cplx z1, cplx z2) {
  if (band_distance(d, z1) <= 0.0 || band_distance(d, z2) <= 0.0)
    throw error(errc::domain, "resolvent multiplier: z lies on the spectrum");
  return [z1, z2](double h) {
    return 1.0 / (cplx(h, 0.0) - z1) - 1.0 / (cplx(h, 0.0) - z2);
  };
}

BoxMultiplierOp::BoxMultiplierOp(int d, long box_radius, std::vector<double> w_left,
                                 std::vector<double> w_right, MultiplierFn fn, long embed_n)
    : d_(d), radius_(box_radius), wl_(std::move(w_left)), wr_(std::move(w_right)) {
  if (d < 1 || d > 6) throw error(errc::invalid_argument, "operator dimension out of range");
  if (box_radius < 0) throw error(errc::invalid_argument, "negative box radius");
  side_ = 2 * radius_ + 1;
  sites_ = 1;
  for (int j = 0; j < d_; ++j) sites_ *= side_;
  if (static_cast<long>(wl_.size()) != sites_ || static_cast<long>(wr_.size()) != sites_)
    throw error(errc::invalid_argument, "weight vectors must cover the box");

  // Margin keeps the periodic wrap of the kernel away from the box.
  const long min_embed = next_fft_size(std::max(side_ + 10, (side_ * 23 + 19) / 20));
  p_ = embed_n > 0 ? embed_n : min_embed;
  if (p_ < side_) throw error(errc::invalid_argument, "embedding smaller than the box");

  long total = 1;
  for (int j = 0; j < d_; ++j) {
    if (total > TorusGrid::kMaxNodes / p_)
      throw error(errc::budget, "embedding lattice exceeds the node budget");
    total *= p_;
  }
  mult_.resize(total);
  work_.resize(total);
  std::vector<long> dims(d_, p_);
  fwd_ = std::make_unique<FftPlan>(dims, work_.data(), -1);
  bwd_ = std::make_unique<FftPlan>(dims, work_.data(), +1);

  embed_idx_.resize(sites_);
  std::vector<long> x(d_, -radius_);
  for (long i = 0; i < sites_; ++i) {
    long idx = 0;
    for (int j = 0; j < d_; ++j) {
      long c = x[j] % p_;
      if (c < 0) c += p_;
      idx = idx * p_ + c;
    }
    embed_idx_[i] = idx;
    for (int j = d_ - 1; j >= 0; --j) {
      if (++x[j] <= radius_) break;
      x[j] = -radius_;
    }
  }
  fill_multiplier(fn);
}

void BoxMultiplierOp::fill_multiplier(const MultiplierFn& fn) {
  if (!fn) throw error(errc::invalid_argument, "null multiplier function");
  std::vector<double> t(p_);
  for (long k = 0; k < p_; ++k) {
    const double s = std::sin(kPi * static_cast<double>(k) / static_cast<double>(p_));
    t[k] = 4.0 * s * s;
  }
  std::vector<long> k(d_, 0);
  const long total = static_cast<long>(mult_.size());
  for (long idx = 0; idx < total; ++idx) {
    double h = 0.0;
    for (int j = 0; j < d_; ++j) h += t[k[j]];
    mult_[idx] = fn(h);
    for (int j = d_ - 1; j >= 0; --j) {
      if (++k[j] < p_) break;
      k[j] = 0;
    }
  }
}

void BoxMultiplierOp::set_multiplier(MultiplierFn fn) {
  kernel_l1_ = -1.0;
  fill_multiplier(fn);
}

void BoxMultiplierOp::apply(const cplx* in, cplx* out) const {
  std::fill(work_.begin(), work_.end(), cplx(0.0, 0.0));
  for (long i = 0; i < sites_; ++i) work_[embed_idx_[i]] = wr_[i] * in[i];
  fwd_->execute();
  for (size_t i = 0; i < work_.size(); ++i) work_[i] *= mult_[i];
  bwd_->execute();
  const double scale = 1.0 / static_cast<double>(work_.size());
  for (long i = 0; i < sites_; ++i) out[i] = wl_[i] * work_[embed_idx_[i]] * scale;
}

void BoxMultiplierOp::apply_adjoint(const cplx* in, cplx* out) const {
  std::fill(work_.begin(), work_.end(), cplx(0.0, 0.0));
  for (long i = 0; i < sites_; ++i) work_[embed_idx_[i]] = wl_[i] * in[i];
  fwd_->execute();
  for (size_t i = 0; i < work_.size(); ++i) work_[i] *= std::conj(mult_[i]);
  bwd_->execute();
  const double scale = 1.0 / static_cast<double>(work_.size());
  for (long i = 0; i < sites_; ++i) out[i] = wr_[i] * work_[embed_idx_[i]] * scale;
}

double BoxMultiplierOp::kernel_l1() const {
  if (kernel_l1_ >= 0.0) return kernel_l1_;
  for (size_t i = 0; i < work_.size(); ++i) work_[i] = mult_[i];
  bwd_->execute();
  double acc = 0.0;
  const double scale = 1.0 / static_cast<double>(work_.size());
  for (const auto& v : work_) acc += std::abs(v) * scale;
  kernel_l1_ = acc;
  return kernel_l1_;
}

void DenseOp::apply(const cplx* in, cplx* out) const {
  for (long i = 0; i < n_; ++i) {
    cplx acc(0.0, 0.0);
    const cplx* row = a_.data() + i * n_;
    for (long j = 0; j < n_; ++j) acc += row[j] * in[j];
    out[i] = acc;
  }
}

void DenseOp::apply_adjoint(const cplx* in, cplx* out) const {
  for (long j = 0; j < n_; ++j) out[j] = cplx(0.0, 0.0);
  for (long i = 0; i < n_; ++i) {
    const cplx* row = a_.data() + i * n_;
    const cplx v = in[i];
    for (long j = 0; j < n_; ++j) out[j] += std::conj(row[j]) * v;
  }
}

DenseOp dense_weighted_resolvent(int d, long box_radius, const std::vector<double>& w_left,
                                 const std::vector<double>& w_right, cplx z, long grid_n,
                                 bool direct_sum) {
  LatticeBox box(d, box_radius);
  const long n = box.site_count();
  if (static_cast<long>(w_left.size()) != n || static_cast<long>(w_right.size()) != n)
    throw error(errc::invalid_argument, "weight vectors must cover the box");

  const long disp_radius = 2 * box_radius;
  const long disp_side = 2 * disp_radius + 1;
  long disp_sites = 1;
  for (int j = 0; j < d; ++j) disp_sites *= disp_side;

  std::vector<cplx> table;
  if (direct_sum) {
    table.resize(disp_sites);
    std::vector<long> x(d, -disp_radius);
    for (long i = 0; i < disp_sites; ++i) {
      table[i] = green_direct(d, z, x.data(), grid_n);
      for (int j = d - 1; j >= 0; --j) {
        if (++x[j] <= disp_radius) break;
        x[j] = -disp_radius;
      }
    }
  } else {
    table = periodized_kernel_box(d, z, disp_radius, grid_n);
  }

  std::vector<cplx> a(n * n);
  std::vector<long> xi(d), xj(d);
  for (long i = 0; i < n; ++i) {
    box.coords_of(i, xi.data());
    for (long j = 0; j < n; ++j) {
      box.coords_of(j, xj.data());
      long idx = 0;
      for (int k = 0; k < d; ++k) idx = idx * disp_side + (xi[k] - xj[k] + disp_radius);
      a[i * n + j] = w_left[i] * table[idx] * w_right[j];
    }
  }
  return DenseOp(n, std::move(a));
}

std::vector<double> bracket_weights(int d, long box_radius, double alpha) {
  LatticeBox box(d, box_radius);
  std::vector<double> w(box.site_count());
  std::vector<long> x(d);
  for (long i = 0; i < box.site_count(); ++i) {
    box.coords_of(i, x.data());
    w[i] = std::pow(LatticeBox::bracket(x.data(), d), -alpha);
  }
  return w;
}

}  // namespace latspec
