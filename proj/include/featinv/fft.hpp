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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace featinv {

// Real 1-D FFT pair backed by FFTW. Plan creation and destruction are
// serialized internally; a single instance is not safe to share across
// threads (it owns scratch buffers), so create one per thread.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }

  // in: size() reals -> out: bins() complex values.
  void forward(const double* in, std::complex<double>* out) const;
  // in: bins() complex values -> out: size() reals, scaled by 1/size().
  void inverse(const std::complex<double>* in, double* out) const;

 private:
  int size_;
  void* fwd_plan_;
  void* inv_plan_;
  mutable std::vector<double> real_buf_;
  mutable std::vector<std::complex<double>> complex_buf_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace featinv
