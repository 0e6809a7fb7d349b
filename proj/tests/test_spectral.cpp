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

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "latspec/box.hpp"
#include "latspec/potential.hpp"
#include "latspec/spectral.hpp"

using namespace latspec;

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Potential random_w(uint64_t& state, int d, long site_bound, long max_sites) {
  const long k = 1 + static_cast<long>(splitmix64(state) % static_cast<uint64_t>(max_sites));
  std::set<std::vector<long>> sites;
  while (static_cast<long>(sites.size()) < k) {
    std::vector<long> x(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j)
      x[static_cast<size_t>(j)] = static_cast<long>(
          splitmix64(state) % static_cast<uint64_t>(2 * site_bound + 1)) - site_bound;
    sites.insert(std::move(x));
  }
  std::vector<std::pair<std::vector<long>, double>> entries;
  for (const auto& s : sites) {
    const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    double w = (2.0 * u - 1.0) * 8.0;
    if (std::abs(w) < 0.5) w = w < 0.0 ? -0.5 : 0.5;
    entries.emplace_back(s, w);
  }
  return Potential::Table(std::move(entries));
}

}  // namespace

TEST_CASE("attractive single site in 1d binds at 2 - sqrt(5)") {
  const Potential v = Potential::PointMass({0}, -1.0);
  const BoxHamiltonian h = build_hamiltonian(1, 200, Boundary::dirichlet, v, 1.0,
                                             Potential::Table({}));
  const auto recs = eig_outside(h);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].value == doctest::Approx(2.0 - std::sqrt(5.0)).epsilon(1e-10));
  CHECK(recs[0].multiplicity == 1);

  // The same eigenvalue shows up as a one-dimensional kernel of H - mu.
  const KernelDimResult kd = kernel_dim(h, recs[0].value, 1e-8);
  CHECK(kd.low >= 1);
  CHECK(kd.high >= kd.low);
}

TEST_CASE("free box has no spectrum outside the band") {
  const BoxHamiltonian h = build_hamiltonian(2, 5, Boundary::dirichlet, Potential::Table({}), 0.0,
                                             Potential::Table({}));
  CHECK(eig_outside(h).empty());
  const KernelDimResult kd = kernel_dim(h, -2.0, 1e-8);
  CHECK(kd.low == 0);
  CHECK(kd.high == 0);
}

TEST_CASE("congruence counting matches the dense solver") {
  const int d = 2;
  const long radius = 6;
  SparseCountingEngine engine(d, radius);
  uint64_t state = 42;

  for (int trial = 0; trial < 8; ++trial) {
    const Potential w = random_w(state, d, 1, 4);
    const BoxHamiltonian h =
        build_hamiltonian(d, radius, Boundary::dirichlet, Potential::Table({}), 0.0, w);
    const auto recs = eig_outside(h);

    for (double e : {-2.0, -0.5, -0.01}) {
      long dense_count = 0;
      for (const auto& r : recs)
        if (r.value < e) dense_count += r.multiplicity;
      CHECK(engine.count_below(w, e) == dense_count);
    }
    for (double e : {4.0 * d + 0.01, 4.0 * d + 0.5, 4.0 * d + 2.0}) {
      long dense_count = 0;
      for (const auto& r : recs)
        if (r.value > e) dense_count += r.multiplicity;
      CHECK(engine.count_above(w, e) == dense_count);
    }
  }
}

TEST_CASE("support-size certificates all pass on random perturbations") {
  const int d = 2;
  SparseCountingEngine engine(d, 8);
  uint64_t state = 7;
  const std::vector<double> mu = {-1.0, -0.25, 4.0 * d + 0.25, 4.0 * d + 1.0};

  for (int trial = 0; trial < 12; ++trial) {
    const Potential w = random_w(state, d, 2, 5);
    const auto certs = engine.certificates(w, mu);
    CHECK(!certs.empty());
    long negatives = 0, positives = 0;
    for (const auto& site : w.support_sites()) {
      const double val = w.eval(site.data(), d);
      if (val < 0.0) ++negatives;
      if (val > 0.0) ++positives;
    }
    for (const auto& c : certs) {
      CHECK(c.pass);
      if (c.check == "below_band") CHECK(c.bound <= negatives);
      if (c.check == "above_band") CHECK(c.bound <= positives);
      if (c.check == "kernel")
        CHECK(c.bound <= static_cast<long>(w.support_sites().size()));
    }
  }
}

TEST_CASE("kernel counts match the dense solver at off-band energies") {
  const int d = 2;
  const long radius = 6;
  SparseCountingEngine engine(d, radius);
  uint64_t state = 99;
  const Potential w = random_w(state, d, 1, 3);
  const BoxHamiltonian h =
      build_hamiltonian(d, radius, Boundary::dirichlet, Potential::Table({}), 0.0, w);
  const auto recs = eig_outside(h);

  // Probe exactly at each outside eigenvalue and at a gap energy.
  for (const auto& r : recs) {
    const long k = engine.kernel_dim(w, r.value, 1e-7);
    CHECK(k >= r.multiplicity);
  }
  CHECK(engine.kernel_dim(w, -37.5, 1e-8) == 0);
}
