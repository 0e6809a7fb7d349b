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

#include "fftp.hpp"

#include <fftw3.h>

#include <mutex>

#include "errors.hpp"

namespace latspec {

namespace {
// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(const std::vector<long>& dims, std::complex<double>* buf, int sign) {
  if (dims.empty()) throw error(errc::invalid_argument, "FftPlan: empty dims");
  std::vector<int> n(dims.begin(), dims.end());
  auto* p = reinterpret_cast<fftw_complex*>(buf);
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_ = fftw_plan_dft(static_cast<int>(n.size()), n.data(), p, p,
                        sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_) throw error(errc::budget, "FftPlan: planner failed");
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute() const { fftw_execute(static_cast<fftw_plan>(plan_)); }

void fft_inplace(const std::vector<long>& dims, std::vector<std::complex<double>>& data, int sign) {
  long total = 1;
  for (long n : dims) total *= n;
  if (static_cast<long>(data.size()) != total)
    throw error(errc::invalid_argument, "fft_inplace: size mismatch");
  FftPlan plan(dims, data.data(), sign);
  plan.execute();
}

void fft_r2c(const std::vector<long>& dims, const std::vector<double>& in,
             std::vector<std::complex<double>>& out) {
  long total = 1;
  for (long n : dims) total *= n;
  if (static_cast<long>(in.size()) != total)
    throw error(errc::invalid_argument, "fft_r2c: size mismatch");
  long out_total = total / dims.back() * (dims.back() / 2 + 1);
  out.assign(out_total, {});
  std::vector<int> n(dims.begin(), dims.end());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_r2c(static_cast<int>(n.size()), n.data(), const_cast<double*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (!plan) throw error(errc::budget, "fft_r2c: planner failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace latspec
