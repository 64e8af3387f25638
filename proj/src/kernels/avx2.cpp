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

// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered after the runtime CPUID check in
// dispatch.cpp.

#ifdef FEATINV_BUILD_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kernels/tables.hpp"

namespace featinv::kernels {
namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_squares_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * x[i];
  return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

double squared_diff_sum_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    total += d * d;
  }
  return total;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(
      static_cast<long long>(0x7fffffffffffffffULL)));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), abs_mask));
  }
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_max_pd(lo, hi);
  double best = _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; i < n; ++i) best = std::max(best, std::fabs(x[i]));
  return best;
}

void scale_avx2(const double* x, double a, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = a * x[i];
}

void multiply_avx2(const double* x, const double* y, double* out,
                   std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

double weighted_squared_distance_avx2(const double* a, const double* b,
                                      const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(d, d), acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += w[i] * d * d;
  }
  return total;
}

void combine_mean_avx2(const double* const* stack, std::size_t p, double* out,
                       std::size_t n) {
  const double inv = 1.0 / static_cast<double>(p);
  const __m256d invv = _mm256_set1_pd(inv);
  std::size_t i = 0;
  // Lanes accumulate in the same k order as the scalar kernel, so the
  // results are bit-identical.
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(stack[0] + i);
    for (std::size_t k = 1; k < p; ++k) {
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(stack[k] + i));
    }
    _mm256_storeu_pd(out + i, _mm256_mul_pd(acc, invv));
  }
  for (; i < n; ++i) {
    double acc = stack[0][i];
    for (std::size_t k = 1; k < p; ++k) acc += stack[k][i];
    out[i] = acc * inv;
  }
}

void combine_max_avx2(const double* const* stack, std::size_t p, double* out,
                      std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(stack[0] + i);
    for (std::size_t k = 1; k < p; ++k) {
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(stack[k] + i));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = stack[0][i];
    for (std::size_t k = 1; k < p; ++k) acc = std::max(acc, stack[k][i]);
    out[i] = acc;
  }
}

// Medians lane-wise via an odd-even transposition network across the p
// registers; p passes fully sort every lane.
inline constexpr std::size_t kMaxNetworkP = 32;

void combine_median_avx2(const double* const* stack, std::size_t p,
                         double* out, std::size_t n) {
  if (p > kMaxNetworkP) {
    std::vector<double> buf(p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < p; ++k) buf[k] = stack[k][i];
      out[i] = median_of(buf.data(), p);
    }
    return;
  }
  __m256d v[kMaxNetworkP];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < p; ++k) v[k] = _mm256_loadu_pd(stack[k] + i);
    for (std::size_t pass = 0; pass < p; ++pass) {
      for (std::size_t j = pass % 2; j + 1 < p; j += 2) {
        const __m256d lo = _mm256_min_pd(v[j], v[j + 1]);
        const __m256d hi = _mm256_max_pd(v[j], v[j + 1]);
        v[j] = lo;
        v[j + 1] = hi;
      }
    }
    __m256d med;
    if (p % 2 == 1) {
      med = v[p / 2];
    } else {
      med = _mm256_mul_pd(_mm256_add_pd(v[p / 2 - 1], v[p / 2]),
                          _mm256_set1_pd(0.5));
    }
    _mm256_storeu_pd(out + i, med);
  }
  double buf[kMaxNetworkP];
  for (; i < n; ++i) {
    for (std::size_t k = 0; k < p; ++k) buf[k] = stack[k][i];
    out[i] = median_of(buf, p);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      sum_avx2,
      sum_squares_avx2,
      dot_avx2,
      squared_diff_sum_avx2,
      max_abs_avx2,
      scale_avx2,
      multiply_avx2,
      weighted_squared_distance_avx2,
      combine_mean_avx2,
      combine_max_avx2,
      combine_median_avx2,
  };
  return table;
}

}  // namespace featinv::kernels

#endif  // FEATINV_BUILD_AVX2
