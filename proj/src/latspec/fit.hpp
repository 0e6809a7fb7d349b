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

#include <vector>

namespace latspec {

/// Least-squares line y = slope*x + intercept with RMS residual.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root-mean-square of (y - fit)
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit in log-log coordinates: returns the exponent of y ~ C x^slope.
/// All x and y must be strictly positive.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Fit y against log(x): slope of y ~ c*log(x) + b. x must be positive.
LineFit fit_semilogx(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace latspec
