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

#include <limits>
#include <vector>

namespace latspec {

/// Sequence-space Lorentz norm of a finitely supported table of values,
/// with the distribution function m(a) = #{x : |u(x)| > a} taken against
/// counting measure.
///
/// For r < infinity:
///   ||u||_{p,r} = p^{1/r} ( int_0^inf m(a)^{r/p} a^{r-1} da )^{1/r},
/// evaluated exactly as a finite sum over the jumps of m. For r = infinity:
///   ||u||_{p,inf} = sup_a a m(a)^{1/p} = max_k k^{1/p} a_k
/// over the decreasing rearrangement a_1 >= a_2 >= ...
///
/// This normalization coincides with the decreasing-rearrangement form
/// ( int_0^inf (t^{1/p} u*(t))^r dt/t )^{1/r}; on u = delta_0 it gives
/// (p/r)^{1/r}, hence 1 whenever p = r and in the weak case r = infinity.
///
/// The embedding ||u||_{p,inf} <= ||u||_{p,r} holds for r <= p (constant
/// one); for r > p it can fail by the factor (p/r)^{1/r} < 1, so callers
/// relying on nesting must keep r <= p.
///
/// Requires p > 0 and r > 0; zero tables have norm zero.
double lorentz_norm(const std::vector<double>& values, double p, double r);

/// Same norm for a piecewise-constant distribution: value `first` occurs
/// with (possibly fractional) multiplicity `second`. With all counts equal
/// to one this agrees with lorentz_norm to roundoff. Entries with
/// non-positive value or count are ignored.
double lorentz_norm_weighted(std::vector<std::pair<double, double>> hist, double p, double r);

inline constexpr double lorentz_inf = std::numeric_limits<double>::infinity();

}  // namespace latspec
