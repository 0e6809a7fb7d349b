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
#include <memory>
#include <vector>

#include "box.hpp"
#include "fftp.hpp"
#include "opnorm.hpp"

namespace latspec {

/// Smallest FFT-friendly size (factors 2,3,5,7; even) >= need.
long next_fft_size(long need);

/// Maps a symbol value h0(xi) to the multiplier applied in frequency space.
using MultiplierFn = std::function<cplx(double)>;

/// h -> 1/(h - z). Throws errc::domain when z sits on [0, 4d].
MultiplierFn resolvent_multiplier(int d, cplx z);

/// h -> 1/(h - z1) - 1/(h - z2), the resolvent difference used by the
/// boundary-value continuity probes.
MultiplierFn resolvent_diff_multiplier(int d, cplx z1, cplx z2);

/// Weighted symbol-function operator  K = W_left f(H0) W_right  restricted
/// to a box, realized on a periodic embedding lattice of P points per axis
/// (P >= box side + margin). f(H0) acts as the Fourier multiplier f(h0(k/P)),
/// so one apply costs two FFTs.
///
/// This is a box-truncated model: the periodization replaces the exact
/// kernel by its P-periodic wrap. The wrap error is reported through
/// kernel_l1() (used in truncation tail bounds) and is controlled by the
/// embedding margin, not by the pointwise resolution rule; weighted operator
/// quantities only need the grid to resolve transits across the box, unlike
/// pointwise kernel values.
class BoxMultiplierOp : public LinOp {
 public:
  BoxMultiplierOp(int d, long box_radius, std::vector<double> w_left,
                  std::vector<double> w_right, MultiplierFn fn, long embed_n = 0);

  long dim() const override { return sites_; }
  void apply(const cplx* in, cplx* out) const override;
  void apply_adjoint(const cplx* in, cplx* out) const override;

  /// Re-target the operator at a new multiplier; weights, plans and
  /// workspace are reused (the sweep hot loop).
  void set_multiplier(MultiplierFn fn);

  long embed_n() const { return p_; }

  /// l^1 norm of the periodized kernel of f(H0), sup over columns of the
  /// absolute row sums of the unweighted operator (they coincide by
  /// translation invariance). One extra FFT, cached.
  double kernel_l1() const;

 private:
  void fill_multiplier(const MultiplierFn& fn);

  int d_;
  long radius_;
  long side_;
  long sites_;
  long p_;
  std::vector<double> wl_, wr_;
  std::vector<long> embed_idx_;  // box site -> embedding index
  std::vector<cplx> mult_;
  mutable std::vector<cplx> work_;
  std::unique_ptr<FftPlan> fwd_, bwd_;
  mutable double kernel_l1_ = -1.0;
};

/// Dense operator over an explicit matrix (row-major), for small boxes and
/// oracle cross-checks.
class DenseOp : public LinOp {
 public:
  DenseOp(long n, std::vector<cplx> a) : n_(n), a_(std::move(a)) {}
  long dim() const override { return n_; }
  void apply(const cplx* in, cplx* out) const override;
  void apply_adjoint(const cplx* in, cplx* out) const override;
  const std::vector<cplx>& data() const { return a_; }

 private:
  long n_;
  std::vector<cplx> a_;
};

/// Entries w_left(x) G0(x-y; z) w_right(y) over the box, kernel values by
/// torus quadrature (FFT path when direct_sum is false, streaming direct
/// sums otherwise; the latter is the oracle route, independent of FFT).
DenseOp dense_weighted_resolvent(int d, long box_radius, const std::vector<double>& w_left,
                                 const std::vector<double>& w_right, cplx z, long grid_n,
                                 bool direct_sum = false);

/// <x>^{-alpha} sampled over the box in lexicographic order.
std::vector<double> bracket_weights(int d, long box_radius, double alpha);

}  // namespace latspec
