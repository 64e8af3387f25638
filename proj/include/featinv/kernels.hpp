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

#include <cstddef>

namespace featinv::kernels {

// Scalar kernels are the reference implementations; the AVX2 variants are
// equivalence-tested against them. The backend is resolved once per
// process: FEATINV_KERNELS=scalar|avx2 overrides the CPUID-based choice.
enum class Backend { kScalar = 0, kAvx2 = 1 };

struct KernelTable {
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*squared_diff_sum)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  void (*scale)(const double* x, double a, double* out, std::size_t n);
  void (*multiply)(const double* x, const double* y, double* out,
                   std::size_t n);
  // sum_j w[j] * (a[j] - b[j])^2
  double (*weighted_squared_distance)(const double* a, const double* b,
                                      const double* w, std::size_t n);
  // Elementwise combine of p arrays of length n. Even p medians average the
  // two central order statistics.
  void (*combine_mean)(const double* const* stack, std::size_t p, double* out,
                       std::size_t n);
  void (*combine_max)(const double* const* stack, std::size_t p, double* out,
                      std::size_t n);
  void (*combine_median)(const double* const* stack, std::size_t p,
                         double* out, std::size_t n);
};

bool backend_available(Backend backend);
// Throws Error if the backend is unavailable on this machine.
const KernelTable& table(Backend backend);
Backend active_backend();
const KernelTable& active();
const char* backend_name(Backend backend);

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sum_squares(const double* x, std::size_t n) {
  return active().sum_squares(x, n);
}
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double squared_diff_sum(const double* x, const double* y,
                               std::size_t n) {
  return active().squared_diff_sum(x, y, n);
}
inline double max_abs(const double* x, std::size_t n) {
  return active().max_abs(x, n);
}
inline void scale(const double* x, double a, double* out, std::size_t n) {
  active().scale(x, a, out, n);
}
inline void multiply(const double* x, const double* y, double* out,
                     std::size_t n) {
  active().multiply(x, y, out, n);
}
inline double weighted_squared_distance(const double* a, const double* b,
                                        const double* w, std::size_t n) {
  return active().weighted_squared_distance(a, b, w, n);
}
inline void combine_mean(const double* const* stack, std::size_t p,
                         double* out, std::size_t n) {
  active().combine_mean(stack, p, out, n);
}
inline void combine_max(const double* const* stack, std::size_t p, double* out,
                        std::size_t n) {
  active().combine_max(stack, p, out, n);
}
inline void combine_median(const double* const* stack, std::size_t p,
                           double* out, std::size_t n) {
  active().combine_median(stack, p, out, n);
}

}  // namespace featinv::kernels
