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

#include "potential.hpp"

#include <algorithm>
#include <cmath>

namespace latspec {

namespace {
double bracket1(double t) { return std::sqrt(1.0 + t * t); }
}

Potential Potential::PowerDecay(double alpha, double amplitude, int sign) {
  if (!(alpha > 0.0)) throw error(errc::invalid_argument, "PowerDecay: alpha must be > 0");
  if (!(amplitude > 0.0)) throw error(errc::invalid_argument, "PowerDecay: amplitude must be > 0");
  if (sign != 1 && sign != -1) throw error(errc::invalid_argument, "PowerDecay: sign must be +-1");
  Potential v;
  v.kind = Kind::power_decay;
  v.alpha = alpha;
  v.amplitude = amplitude;
  v.sign = sign;
  return v;
}

Potential Potential::PointMass(std::vector<long> site, double value) {
  Potential v;
  v.kind = Kind::point_mass;
  v.site = std::move(site);
  v.value = value;
  return v;
}

Potential Potential::Table(std::vector<std::pair<std::vector<long>, double>> entries) {
  Potential v;
  v.kind = Kind::table;
  v.entries = std::move(entries);
  std::sort(v.entries.begin(), v.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

Potential Potential::AnisotropicWeight(double p) {
  if (!(p > 0.0)) throw error(errc::invalid_argument, "AnisotropicWeight: p must be > 0");
  Potential v;
  v.kind = Kind::anisotropic_weight;
  v.p = p;
  return v;
}

Potential Potential::FlatBandWeight() {
  Potential v;
  v.kind = Kind::flat_band_weight;
  return v;
}

double Potential::eval(const long* x, int d) const {
  switch (kind) {
    case Kind::power_decay:
      return sign * amplitude * std::pow(LatticeBox::bracket(x, d), -alpha);
    case Kind::point_mass: {
      if (static_cast<int>(site.size()) != d)
        throw error(errc::invalid_argument, "point_mass: dimension mismatch");
      for (int j = 0; j < d; ++j)
        if (x[j] != site[j]) return 0.0;
      return value;
    }
    case Kind::table: {
      for (const auto& [s, v] : entries) {
        if (static_cast<int>(s.size()) != d)
          throw error(errc::invalid_argument, "table: dimension mismatch");
        bool hit = true;
        for (int j = 0; j < d; ++j)
          if (s[j] != x[j]) {
            hit = false;
            break;
          }
        if (hit) return v;
      }
      return 0.0;
    }
    case Kind::anisotropic_weight: {
      double w = std::pow(bracket1(static_cast<double>(x[d - 1])), -1.0 / p);
      for (int j = 0; j + 1 < d; ++j)
        w *= std::pow(bracket1(static_cast<double>(x[j] - x[d - 1])), -1.0 / p);
      return w;
    }
    case Kind::flat_band_weight: {
      if (d != 2) throw error(errc::invalid_argument, "flat_band_weight: requires d = 2");
      return std::pow(bracket1(static_cast<double>(x[0] + x[1])), -0.5) *
             std::pow(bracket1(static_cast<double>(x[0] - x[1])), -1.0);
    }
  }
  throw error(errc::invalid_argument, "Potential: unknown kind");
}

bool Potential::finite_support() const {
  return kind == Kind::point_mass || kind == Kind::table;
}

std::vector<std::vector<long>> Potential::support_sites() const {
  std::vector<std::vector<long>> out;
  if (kind == Kind::point_mass) {
    out.push_back(site);
  } else if (kind == Kind::table) {
    for (const auto& [s, v] : entries)
      if (v != 0.0) out.push_back(s);
  } else {
    throw error(errc::invalid_argument, "support_sites: potential has infinite support");
  }
  std::sort(out.begin(), out.end());
  return out;
}

long Potential::support_radius() const {
  long r = 0;
  for (const auto& s : support_sites())
    for (long c : s) r = std::max(r, std::abs(c));
  return r;
}

std::string Potential::kind_name() const {
  switch (kind) {
    case Kind::power_decay: return "power_decay";
    case Kind::point_mass: return "point_mass";
    case Kind::table: return "table";
    case Kind::anisotropic_weight: return "anisotropic_weight";
    case Kind::flat_band_weight: return "flat_band_weight";
  }
  return "?";
}

std::vector<double> sample_abs(const Potential& v, const LatticeBox& box) {
  std::vector<double> out(box.site_count());
  std::vector<long> x(box.dim());
  for (long i = 0; i < box.site_count(); ++i) {
    box.coords_of(i, x.data());
    out[i] = std::abs(v.eval(x.data(), box.dim()));
  }
  return out;
}

}  // namespace latspec
