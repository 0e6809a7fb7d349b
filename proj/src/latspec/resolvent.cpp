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

#include "resolvent.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fftp.hpp"

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;

long lex_index(int d, long radius, const long* x) {
  const long side = 2 * radius + 1;
  long idx = 0;
  for (int j = 0; j < d; ++j) idx = idx * side + (x[j] + radius);
  return idx;
}

// Multiplier samples for one axis: m[k] = 4 sin^2(pi k / n).
std::vector<double> axis_symbol(long n) {
  std::vector<double> t(n);
  for (long k = 0; k < n; ++k) {
    const double s = std::sin(kPi * static_cast<double>(k) / static_cast<double>(n));
    t[k] = 4.0 * s * s;
  }
  return t;
}

// Periodized kernel on the full n^d torus via backward FFT of the sampled
// multiplier; values indexed by lattice point modulo n.
std::vector<cplx> torus_kernel(int d, cplx z, long n) {
  std::vector<long> dims(d, n);
  long total = 1;
  for (int j = 0; j < d; ++j) total *= n;
  const auto t = axis_symbol(n);
  std::vector<cplx> data(total);
  // Fill h0(k/n) - z by accumulating per-axis tables.
  std::vector<long> k(d, 0);
  for (long idx = 0; idx < total; ++idx) {
    double h = 0.0;
    for (int j = 0; j < d; ++j) h += t[k[j]];
    data[idx] = 1.0 / (cplx(h, 0.0) - z);
    for (int j = d - 1; j >= 0; --j) {
      if (++k[j] < n) break;
      k[j] = 0;
    }
  }
  fft_inplace(dims, data, +1);
  const double scale = 1.0 / static_cast<double>(total);
  for (auto& v : data) v *= scale;
  return data;
}

void extract_box(int d, long radius, long n, const std::vector<cplx>& torus,
                 std::vector<cplx>& out) {
  const long side = 2 * radius + 1;
  long sites = 1;
  for (int j = 0; j < d; ++j) sites *= side;
  out.resize(sites);
  std::vector<long> x(d, -radius);
  for (long i = 0; i < sites; ++i) {
    long idx = 0;
    for (int j = 0; j < d; ++j) {
      long c = x[j] % n;
      if (c < 0) c += n;
      idx = idx * n + c;
    }
    out[i] = torus[idx];
    for (int j = d - 1; j >= 0; --j) {
      if (++x[j] <= radius) break;
      x[j] = -radius;
    }
  }
}

}  // namespace

cplx KernelTable::value(const long* x) const { return values[lex_index(d, radius, x)]; }
double KernelTable::err_at(const long* x) const { return err[lex_index(d, radius, x)]; }

long admissible_grid_n(int d, cplx z, long radius) {
  const long need = std::max(resolution_min_n(d, z), 2 * radius + 1);
  long n = 16;
  while (n < need) n <<= 1;
  return n;
}

KernelTable free_kernel(int d, cplx z, long radius, const TorusGrid& grid) {
  if (grid.dim() != d) throw error(errc::invalid_argument, "free_kernel: grid dimension mismatch");
  const long n = grid.n();
  const long min_n = resolution_min_n(d, z);
  if (n < min_n)
    throw resolution_error("free_kernel: grid too coarse for z, need N >= " + std::to_string(min_n),
                           min_n);
  if (n < 2 * radius + 1)
    throw error(errc::invalid_argument, "free_kernel: grid must cover the displacement box");

  KernelTable kt;
  kt.d = d;
  kt.radius = radius;
  kt.z = z;
  kt.grid_n = n;

  const auto fine = torus_kernel(d, z, n);
  extract_box(d, radius, n, fine, kt.values);

  // Error estimate: difference against the half grid when it still covers
  // the box, otherwise against direct sums at probe sites.
  kt.err.assign(kt.values.size(), 0.0);
  const long half = n / 2;
  if (half >= 2 * radius + 1 && half >= 16) {
    const auto coarse = torus_kernel(d, z, half);
    std::vector<cplx> coarse_box;
    extract_box(d, radius, half, coarse, coarse_box);
    for (size_t i = 0; i < kt.values.size(); ++i)
      kt.err[i] = std::abs(kt.values[i] - coarse_box[i]);
  } else {
    for (size_t i = 0; i < kt.err.size(); ++i) kt.err[i] = std::abs(kt.values[i]) * 1e-3;
  }
  return kt;
}

std::vector<cplx> periodized_kernel_box(int d, cplx z, long radius, long grid_n) {
  if (grid_n < 2 * radius + 1)
    throw error(errc::invalid_argument,
                "periodized_kernel_box: grid must cover the displacement box");
  if (band_distance(d, z) <= 0.0)
    throw error(errc::domain, "periodized_kernel_box: z lies on the spectrum");
  long total = 1;
  for (int j = 0; j < d; ++j) {
    if (total > TorusGrid::kMaxNodes / grid_n)
      throw error(errc::budget, "periodized_kernel_box: grid exceeds the node budget");
    total *= grid_n;
  }
  const auto torus = torus_kernel(d, z, grid_n);
  std::vector<cplx> out;
  extract_box(d, radius, grid_n, torus, out);
  return out;
}

cplx green_direct(int d, cplx z, const long* x, long grid_n) {
  const long n = grid_n;
  const long min_n = resolution_min_n(d, z);
  if (n < min_n)
    throw resolution_error(
        "green_direct: grid too coarse for z, need N >= " + std::to_string(min_n), min_n);
  const auto t = axis_symbol(n);

  // Separate the phase per axis; accumulate over the grid in lexicographic
  // order, innermost axis unrolled against a cached cos/sin table.
  std::vector<std::vector<cplx>> phase(d);
  for (int j = 0; j < d; ++j) {
    phase[j].resize(n);
    const double xj = x ? static_cast<double>(x[j]) : 0.0;
    for (long k = 0; k < n; ++k) {
      const double arg = 2.0 * kPi * xj * static_cast<double>(k) / static_cast<double>(n);
      phase[j][k] = cplx(std::cos(arg), std::sin(arg));
    }
  }

  cplx acc(0.0, 0.0);
  std::vector<long> k(d, 0);
  long total = 1;
  for (int j = 0; j < d; ++j) {
    if (total > (1L << 62) / n) throw error(errc::budget, "green_direct: grid too large");
    total *= n;
  }
  if (d == 1) {
    for (long k0 = 0; k0 < n; ++k0) acc += phase[0][k0] / (cplx(t[k0], 0.0) - z);
  } else {
    // Outer loop over all but the last axis.
    long outer = total / n;
    std::vector<long> ko(d - 1, 0);
    for (long o = 0; o < outer; ++o) {
      double h_partial = 0.0;
      cplx ph_partial(1.0, 0.0);
      for (int j = 0; j < d - 1; ++j) {
        h_partial += t[ko[j]];
        ph_partial *= phase[j][ko[j]];
      }
      const cplx base = cplx(h_partial, 0.0) - z;
      cplx inner(0.0, 0.0);
      for (long kl = 0; kl < n; ++kl) inner += phase[d - 1][kl] / (base + t[kl]);
      acc += ph_partial * inner;
      for (int j = d - 2; j >= 0; --j) {
        if (++ko[j] < n) break;
        ko[j] = 0;
      }
    }
  }
  return acc / static_cast<double>(total);
}

}  // namespace latspec
