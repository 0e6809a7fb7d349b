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

namespace latspec {

/// Cauchy-sequence probe for boundary values of the weighted resolvent on
/// the energy axis: with w = <x>^{-s},
///   M_k = || w (R(mu + i eps_k) - R(mu + i eps_{k+1})) w ||
/// along a decreasing eps ladder. When the weighted boundary value exists
/// with a Holder modulus, M_k ~ eps_k^theta with theta > 0 and the ladder
/// is Cauchy; insufficient weight decay shows up as a flat or growing tail.
struct BoundaryValueReport {
  int d = 0;
  double s = 0.0;
  double mu = 0.0;
  long box_radius = 0;
  long embed_n = 0;
  std::vector<std::pair<double, double>> eps_pairs;
  std::vector<double> m_values;
  double fitted_exponent = 0.0;  ///< slope of log M_k vs log eps_k
  double residual = 0.0;
  std::string verdict;  ///< "cauchy", "divergent", or "inconclusive"
};

/// eps_ladder empty picks {10^{-k/2}, k = 0..6}. The truncation box and
/// embedding follow the same conventions as the norm sweeps.
BoundaryValueReport boundary_value_continuity(int d, double s, double mu, long box_radius = 16,
                                              std::vector<double> eps_ladder = {},
                                              long embed_n = 0, double rel_tol = 1e-6);

}  // namespace latspec
