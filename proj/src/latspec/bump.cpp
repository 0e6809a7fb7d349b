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

#include "bump.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "fftp.hpp"

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;
// Period U of the sampled copy of chi and FFT size M: the transform comes
// out on y = k/U up to M/(2U), sampled densely enough (1/U) for cubic
// interpolation of the O(1)-scale oscillations of psi.
constexpr long kPeriod = 128;
constexpr long kFftSize = 1L << 16;

}  // namespace

double BumpProfile::chi(double u) {
  const double s = 4.0 * u;
  if (!(s > -1.0 && s < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

BumpProfile::BumpProfile() {
  const double du = static_cast<double>(kPeriod) / static_cast<double>(kFftSize);
  std::vector<std::complex<double>> data(kFftSize, {0.0, 0.0});
  for (long j = 0; j < kFftSize; ++j) {
    double u = j * du;
    if (u > kPeriod / 2.0) u -= kPeriod;
    data[j] = chi(u);
  }
  fft_inplace({kFftSize}, data, +1);

  dy_ = 1.0 / static_cast<double>(kPeriod);
  const long half = kFftSize / 2;
  table_.resize(half + 1);
  for (long k = 0; k <= half; ++k) table_[k] = data[k].real() * du;
  ymax_ = half * dy_;
}

double BumpProfile::psi(double y) const {
  const double ay = std::abs(y);
  if (ay >= ymax_ - 2.0 * dy_) return 0.0;
  const double t = ay / dy_;
  const long i = static_cast<long>(t);
  const double f = t - i;
  // Catmull-Rom through the four surrounding samples; psi is even, so the
  // sample left of 0 mirrors index 1.
  const double p0 = table_[i >= 1 ? i - 1 : 1];
  const double p1 = table_[i];
  const double p2 = table_[i + 1];
  const double p3 = table_[i + 2];
  return p1 + 0.5 * f * (p2 - p0 + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                        f * (3.0 * (p1 - p2) + p3 - p0)));
}

double BumpProfile::psi_direct(double y, long quad_points) {
  const double a = 0.25;
  const double h = 2.0 * a / static_cast<double>(quad_points);
  double acc = 0.0;
  for (long j = 0; j < quad_points; ++j) {
    const double u = -a + (j + 0.5) * h;
    acc += chi(u) * std::cos(2.0 * kPi * u * y);
  }
  return acc * h;
}

const BumpProfile& shared_bump() {
  static const BumpProfile instance;
  return instance;
}

}  // namespace latspec
