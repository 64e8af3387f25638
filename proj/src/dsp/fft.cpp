// Copyright 2026 The Featinv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "featinv/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "featinv/types.hpp"

namespace featinv {
namespace {

// The FFTW planner is the only part of the library that is not
// thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(int size) : size_(size) {
  if (size < 2) throw Error("FFT size must be at least 2");
  real_buf_.resize(static_cast<std::size_t>(size));
  complex_buf_.resize(static_cast<std::size_t>(size / 2 + 1));
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_plan_ = fftw_plan_dft_r2c_1d(
      size, real_buf_.data(),
      reinterpret_cast<fftw_complex*>(complex_buf_.data()), FFTW_ESTIMATE);
  inv_plan_ = fftw_plan_dft_c2r_1d(
      size, reinterpret_cast<fftw_complex*>(complex_buf_.data()),
      real_buf_.data(), FFTW_ESTIMATE);
  if (fwd_plan_ == nullptr || inv_plan_ == nullptr) {
    throw Error("failed to create FFTW plan");
  }
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_plan_));
}

void RealFft::forward(const double* in, std::complex<double>* out) const {
  std::copy(in, in + size_, real_buf_.begin());
  fftw_execute(static_cast<fftw_plan>(fwd_plan_));
  std::copy(complex_buf_.begin(), complex_buf_.end(), out);
}

void RealFft::inverse(const std::complex<double>* in, double* out) const {
  std::copy(in, in + bins(), complex_buf_.begin());
  // The c2r transform destroys its input, which is why it runs on the
  // scratch copy. FFTW's inverse is unnormalized; scale by 1/size here.
  fftw_execute(static_cast<fftw_plan>(inv_plan_));
  const double inv_n = 1.0 / static_cast<double>(size_);
  for (int i = 0; i < size_; ++i) out[i] = real_buf_[i] * inv_n;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace featinv
