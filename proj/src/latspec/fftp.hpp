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

#include <complex>
#include <vector>

namespace latspec {

/// Reusable in-place complex-to-complex DFT plan over a fixed buffer.
/// All planning uses FFTW_ESTIMATE so repeated runs produce bit-identical
/// output (measured planning may pick different algorithms per run).
class FftPlan {
 public:
  /// Plans an in-place transform on `buf`, which must keep its address for
  /// the lifetime of the plan. dims is per-axis sizes, slowest first.
  /// sign: -1 forward (e^{-2 pi i}), +1 backward (e^{+2 pi i}). Unnormalized.
  FftPlan(const std::vector<long>& dims, std::complex<double>* buf, int sign);
  ~FftPlan();

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute() const;

 private:
  void* plan_;
};

/// One-shot in-place c2c transform (plans with FFTW_ESTIMATE, then destroys).
void fft_inplace(const std::vector<long>& dims, std::vector<std::complex<double>>& data, int sign);

/// One-shot out-of-place real-to-complex transform. Output has the packed
/// layout with last axis length dims.back()/2 + 1.
void fft_r2c(const std::vector<long>& dims, const std::vector<double>& in,
             std::vector<std::complex<double>>& out);

}  // namespace latspec
