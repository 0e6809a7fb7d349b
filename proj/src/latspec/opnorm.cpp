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

#include "opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "errors.hpp"

namespace latspec {

namespace {

// splitmix64: deterministic start vector independent of any stdlib
// distribution internals.
uint64_t splitmix(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_double(uint64_t& s) {
  return (static_cast<double>(splitmix(s) >> 11) / 9007199254740992.0) * 2.0 - 1.0;
}

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// Largest eigenvalue of the symmetric tridiagonal (alpha, beta) by bisection
// with Sturm counts; cheap and free of dense-eigensolver overhead.
double tridiag_max_eig(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const size_t m = alpha.size();
  double hi = 0.0, lo = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double bl = i > 0 ? std::abs(beta[i - 1]) : 0.0;
    const double br = i + 1 < m ? std::abs(beta[i]) : 0.0;
    hi = std::max(hi, alpha[i] + bl + br);
    lo = std::min(lo, alpha[i] - bl - br);
  }
  auto count_below = [&](double x) {
    // Sturm sequence: number of eigenvalues < x.
    int count = 0;
    double q = alpha[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < m; ++i) {
      const double b2 = beta[i - 1] * beta[i - 1];
      q = alpha[i] - x - b2 / (q == 0.0 ? 1e-300 : q);
      if (q < 0) ++count;
    }
    return count;
  };
  const int want = static_cast<int>(m) - 1;  // index of the largest
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) > want)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double top_singular_value(const LinOp& op, const NormOptions& opts, std::vector<cplx>* last_vec) {
  const long n = op.dim();
  if (n <= 0) throw error(errc::invalid_argument, "top_singular_value: empty operator");

  std::vector<cplx> q(n), q_prev(n, cplx(0, 0)), w(n), tmp(n);
  if (opts.warm_start && static_cast<long>(opts.warm_start->size()) == n) {
    q = *opts.warm_start;
  } else {
    uint64_t seed = 0x1234abcdULL ^ static_cast<uint64_t>(n);
    for (long i = 0; i < n; ++i) q[i] = cplx(unit_double(seed), unit_double(seed));
  }
  double nq = norm2(q);
  if (nq == 0.0) throw error(errc::invalid_argument, "top_singular_value: zero start vector");
  for (auto& x : q) x /= nq;

  std::vector<double> alpha, beta;
  double prev_ritz = -1.0, prev_prev_ritz = -1.0;
  int stable = 0;

  for (long k = 0; k < opts.max_iter; ++k) {
    // w = A^H A q  - beta_{k-1} q_prev
    op.apply(q.data(), tmp.data());
    op.apply_adjoint(tmp.data(), w.data());
    if (!beta.empty())
      for (long i = 0; i < n; ++i) w[i] -= beta.back() * q_prev[i];
    cplx a(0, 0);
    for (long i = 0; i < n; ++i) a += std::conj(q[i]) * w[i];
    const double ak = a.real();
    alpha.push_back(ak);
    for (long i = 0; i < n; ++i) w[i] -= ak * q[i];
    // One re-orthogonalization pass against the current pair keeps the
    // recursion healthy without storing the basis.
    cplx c0(0, 0), c1(0, 0);
    for (long i = 0; i < n; ++i) {
      c0 += std::conj(q[i]) * w[i];
      c1 += std::conj(q_prev[i]) * w[i];
    }
    for (long i = 0; i < n; ++i) w[i] -= c0 * q[i] + c1 * q_prev[i];

    const double ritz = tridiag_max_eig(alpha, beta);
    const double sv = std::sqrt(std::max(0.0, ritz));
    if (k >= 3) {
      const double prev_sv = std::sqrt(std::max(0.0, prev_ritz));
      if (std::abs(sv - prev_sv) <= opts.rel_tol * std::max(sv, 1e-300)) {
        if (++stable >= 3) {
          if (last_vec) *last_vec = q;
          return sv;
        }
      } else {
        stable = 0;
      }
    }
    prev_prev_ritz = prev_ritz;
    prev_ritz = ritz;

    const double bk = norm2(w);
    if (bk <= 1e-14 * std::max(1.0, std::abs(ak))) {
      // Krylov space exhausted: the tridiagonal spectrum is exact.
      if (last_vec) *last_vec = q;
      return std::sqrt(std::max(0.0, tridiag_max_eig(alpha, beta)));
    }
    beta.push_back(bk);
    q_prev.swap(q);
    q.swap(w);
    for (auto& x : q) x /= bk;
  }

  throw convergence_error("top_singular_value: stagnation before reaching tolerance",
                          std::sqrt(std::max(0.0, prev_ritz)),
                          std::sqrt(std::max(0.0, prev_prev_ritz)));
}

double top_singular_value(const LinOp& op, const NormOptions& opts) {
  return top_singular_value(op, opts, nullptr);
}

}  // namespace latspec
