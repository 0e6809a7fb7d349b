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

#include "box.hpp"

#include <cmath>

namespace latspec {

LatticeBox::LatticeBox(int d, long radius, Boundary bc) : d_(d), radius_(radius), bc_(bc) {
  if (d < 1 || d > 6) throw error(errc::invalid_argument, "LatticeBox: d out of range [1,6]");
  if (radius < 0) throw error(errc::invalid_argument, "LatticeBox: radius must be >= 0");
  side_ = 2 * radius + 1;
  sites_ = 1;
  for (int j = 0; j < d_; ++j) {
    if (sites_ > (1L << 40) / side_) throw error(errc::budget, "LatticeBox: site count overflow");
    sites_ *= side_;
  }
}

long LatticeBox::index_of(const long* x) const {
  long idx = 0;
  for (int j = 0; j < d_; ++j) {
    const long c = x[j] + radius_;
    if (c < 0 || c >= side_) throw error(errc::invalid_argument, "LatticeBox: site outside box");
    idx = idx * side_ + c;
  }
  return idx;
}

void LatticeBox::coords_of(long idx, long* x) const {
  for (int j = d_ - 1; j >= 0; --j) {
    x[j] = idx % side_ - radius_;
    idx /= side_;
  }
}

bool LatticeBox::contains(const long* x) const noexcept {
  for (int j = 0; j < d_; ++j)
    if (x[j] < -radius_ || x[j] > radius_) return false;
  return true;
}

double LatticeBox::bracket(const long* x, int d) {
  double s = 1.0;
  for (int j = 0; j < d; ++j) s += static_cast<double>(x[j]) * static_cast<double>(x[j]);
  return std::sqrt(s);
}

std::vector<cplx> apply_h0(const LatticeBox& box, const std::vector<cplx>& u) {
  const int d = box.dim();
  const long n = box.site_count();
  if (static_cast<long>(u.size()) != n)
    throw error(errc::invalid_argument, "apply_h0: size mismatch with box");
  std::vector<cplx> y(n);
  std::vector<long> x(d);
  // Strides of coordinate j in the lexicographic layout (last fastest).
  std::vector<long> stride(d);
  stride[d - 1] = 1;
  for (int j = d - 2; j >= 0; --j) stride[j] = stride[j + 1] * box.side();
  const long R = box.radius();
  for (long i = 0; i < n; ++i) {
    box.coords_of(i, x.data());
    cplx acc = 2.0 * static_cast<double>(d) * u[i];
    for (int j = 0; j < d; ++j) {
      // +e_j neighbor
      if (x[j] + 1 <= R) {
        acc -= u[i + stride[j]];
      } else if (box.boundary() == Boundary::periodic) {
        acc -= u[i - (box.side() - 1) * stride[j]];
      }
      // -e_j neighbor
      if (x[j] - 1 >= -R) {
        acc -= u[i - stride[j]];
      } else if (box.boundary() == Boundary::periodic) {
        acc -= u[i + (box.side() - 1) * stride[j]];
      }
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace latspec
