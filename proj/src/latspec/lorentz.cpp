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

#include "lorentz.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace latspec {

double lorentz_norm(const std::vector<double>& values, double p, double r) {
  if (!(p > 0.0)) throw error(errc::invalid_argument, "lorentz_norm: p must be > 0");
  if (!(r > 0.0)) throw error(errc::invalid_argument, "lorentz_norm: r must be > 0");

  std::vector<double> a;
  a.reserve(values.size());
  for (double v : values) {
    const double m = std::abs(v);
    if (m > 0.0) a.push_back(m);
  }
  if (a.empty()) return 0.0;
  std::sort(a.begin(), a.end(), std::greater<double>());
  const size_t n = a.size();

  if (std::isinf(r)) {
    double best = 0.0;
    for (size_t k = 1; k <= n; ++k)
      best = std::max(best, std::pow(static_cast<double>(k), 1.0 / p) * a[k - 1]);
    return best;
  }

  // m(alpha) = k on [a_{k+1}, a_k); the jump sum below is the exact value of
  // the layer-cake integral, no quadrature involved.
  double acc = 0.0;
  for (size_t k = 1; k <= n; ++k) {
    const double hi = std::pow(a[k - 1], r);
    const double lo = (k < n) ? std::pow(a[k], r) : 0.0;
    acc += std::pow(static_cast<double>(k), r / p) * (hi - lo) / r;
  }
  return std::pow(p * acc, 1.0 / r);
}

double lorentz_norm_weighted(std::vector<std::pair<double, double>> hist, double p, double r) {
  if (!(p > 0.0)) throw error(errc::invalid_argument, "lorentz_norm_weighted: p must be > 0");
  if (!(r > 0.0)) throw error(errc::invalid_argument, "lorentz_norm_weighted: r must be > 0");

  hist.erase(std::remove_if(hist.begin(), hist.end(),
                            [](const std::pair<double, double>& e) {
                              return !(e.first > 0.0) || !(e.second > 0.0);
                            }),
             hist.end());
  if (hist.empty()) return 0.0;
  std::sort(hist.begin(), hist.end(),
            [](const std::pair<double, double>& a, const std::pair<double, double>& b) {
              return a.first > b.first;
            });
  const size_t n = hist.size();

  if (std::isinf(r)) {
    double best = 0.0;
    double cum = 0.0;
    for (size_t k = 0; k < n; ++k) {
      cum += hist[k].second;
      best = std::max(best, std::pow(cum, 1.0 / p) * hist[k].first);
    }
    return best;
  }

  double acc = 0.0;
  double cum = 0.0;
  for (size_t k = 0; k < n; ++k) {
    cum += hist[k].second;
    const double hi = std::pow(hist[k].first, r);
    const double lo = (k + 1 < n) ? std::pow(hist[k + 1].first, r) : 0.0;
    acc += std::pow(cum, r / p) * (hi - lo) / r;
  }
  return std::pow(p * acc, 1.0 / r);
}

}  // namespace latspec
