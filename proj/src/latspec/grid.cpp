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

#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace latspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

double symbol_eval(const double* xi, int d) {
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    const double s = std::sin(kPi * xi[j]);
    acc += 4.0 * s * s;
  }
  return acc;
}

double symbol_eval(const std::vector<double>& xi) {
  return symbol_eval(xi.data(), static_cast<int>(xi.size()));
}

std::vector<double> symbol_grad(const std::vector<double>& xi) {
  std::vector<double> g(xi.size());
  for (size_t j = 0; j < xi.size(); ++j) g[j] = 4.0 * kPi * std::sin(2.0 * kPi * xi[j]);
  return g;
}

std::vector<double> symbol_hess_diag(const std::vector<double>& xi) {
  std::vector<double> h(xi.size());
  for (size_t j = 0; j < xi.size(); ++j) h[j] = 8.0 * kPi * kPi * std::cos(2.0 * kPi * xi[j]);
  return h;
}

double symbol_grad_norm(const double* xi, int d) {
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    const double g = 4.0 * kPi * std::sin(2.0 * kPi * xi[j]);
    acc += g * g;
  }
  return std::sqrt(acc);
}

std::vector<ThresholdPoint> critical_points(int d) {
  if (d < 1 || d > 30) throw error(errc::invalid_argument, "critical_points: d out of range");
  std::vector<ThresholdPoint> pts;
  pts.reserve(1L << d);
  for (long mask = 0; mask < (1L << d); ++mask) {
    ThresholdPoint p;
    p.xi.resize(d);
    for (int j = 0; j < d; ++j) {
      const bool half = (mask >> j) & 1;
      p.xi[j] = half ? 0.5 : 0.0;
      if (half) ++p.signature;
    }
    p.energy = 4.0 * p.signature;
    p.elliptic = (p.signature == 0 || p.signature == d);
    pts.push_back(std::move(p));
  }
  return pts;
}

TorusGrid::TorusGrid(int d, long n) : d_(d), n_(n) {
  if (d < 1 || d > 6) throw error(errc::invalid_argument, "TorusGrid: d out of range [1,6]");
  if (n < 16 || (n & (n - 1)) != 0)
    throw error(errc::invalid_argument, "TorusGrid: n must be a power of two >= 16");
  nodes_ = 1;
  for (int j = 0; j < d; ++j) {
    if (nodes_ > kMaxNodes / n) throw error(errc::budget, "TorusGrid: node count exceeds memory budget");
    nodes_ *= n;
  }
  if (nodes_ > kMaxNodes) throw error(errc::budget, "TorusGrid: node count exceeds memory budget");
}

double band_distance(int d, cplx z) {
  const double re = z.real();
  const double im = z.imag();
  const double top = 4.0 * d;
  double dre = 0.0;
  if (re < 0.0) dre = -re;
  else if (re > top) dre = re - top;
  return std::hypot(dre, im);
}

long resolution_min_n(int d, cplx z) {
  const double delta = band_distance(d, z);
  if (delta <= 0.0)
    throw error(errc::domain, "resolution_min_n: z on the essential band has no admissible grid");
  const double re = z.real();
  const bool near_elliptic = std::min(std::abs(re), std::abs(re - 4.0 * d)) <= kEllipticWindow;
  const double raw = near_elliptic ? kResolutionConstant / std::sqrt(delta)
                                   : kResolutionConstant / delta;
  return std::max(16L, static_cast<long>(std::ceil(raw)));
}

}  // namespace latspec
