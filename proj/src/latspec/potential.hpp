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

#include <string>
#include <utility>
#include <vector>

#include "box.hpp"

namespace latspec {

/// Potential / weight families used across the engine.
///
/// power_decay       sign * amplitude * <x>^{-alpha}
/// point_mass        value * indicator(x == site)
/// table             explicit finite list of (site, value)
/// anisotropic_weight  <x_d>^{-1/p} * prod_{j<d} <x_j - x_d>^{-1/p}
/// flat_band_weight  <x_1 + x_2>^{-1/2} * <x_1 - x_2>^{-1}   (d = 2)
struct Potential {
  enum class Kind { power_decay, point_mass, table, anisotropic_weight, flat_band_weight };

  Kind kind = Kind::power_decay;
  double alpha = 2.0;
  double amplitude = 1.0;
  int sign = -1;
  std::vector<long> site;
  double value = -1.0;
  std::vector<std::pair<std::vector<long>, double>> entries;
  double p = 6.0;

  static Potential PowerDecay(double alpha, double amplitude = 1.0, int sign = -1);
  static Potential PointMass(std::vector<long> site, double value);
  static Potential Table(std::vector<std::pair<std::vector<long>, double>> entries);
  static Potential AnisotropicWeight(double p);
  static Potential FlatBandWeight();

  double eval(const long* x, int d) const;
  bool finite_support() const;
  /// Sites of a finite-support potential, sorted lexicographically.
  std::vector<std::vector<long>> support_sites() const;
  /// Max Chebyshev radius of the finite support (0 for origin-only).
  long support_radius() const;

  std::string kind_name() const;
};

/// |V| sampled on a box, for Lorentz-membership checks.
std::vector<double> sample_abs(const Potential& v, const LatticeBox& box);

}  // namespace latspec
