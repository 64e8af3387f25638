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

#include <algorithm>
#include <cmath>
#include <vector>

#include "kernels/tables.hpp"

namespace featinv::kernels {

double median_of(double* values, std::size_t p) {
  std::sort(values, values + p);
  // Even p: average of the two central order statistics, smaller first so
  // the SIMD sorting-network path produces bit-identical sums.
  if (p % 2 == 1) return values[p / 2];
  return (values[p / 2 - 1] + values[p / 2]) * 0.5;
}

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double squared_diff_sum_scalar(const double* x, const double* y,
                               std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::fabs(x[i]));
  return acc;
}

void scale_scalar(const double* x, double a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void multiply_scalar(const double* x, const double* y, double* out,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

double weighted_squared_distance_scalar(const double* a, const double* b,
                                        const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += w[i] * d * d;
  }
  return acc;
}

void combine_mean_scalar(const double* const* stack, std::size_t p,
                         double* out, std::size_t n) {
  const double inv = 1.0 / static_cast<double>(p);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = stack[0][i];
    for (std::size_t k = 1; k < p; ++k) acc += stack[k][i];
    out[i] = acc * inv;
  }
}

void combine_max_scalar(const double* const* stack, std::size_t p, double* out,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = stack[0][i];
    for (std::size_t k = 1; k < p; ++k) acc = std::max(acc, stack[k][i]);
    out[i] = acc;
  }
}

void combine_median_scalar(const double* const* stack, std::size_t p,
                           double* out, std::size_t n) {
  std::vector<double> buf(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p; ++k) buf[k] = stack[k][i];
    out[i] = median_of(buf.data(), p);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      sum_scalar,
      sum_squares_scalar,
      dot_scalar,
      squared_diff_sum_scalar,
      max_abs_scalar,
      scale_scalar,
      multiply_scalar,
      weighted_squared_distance_scalar,
      combine_mean_scalar,
      combine_max_scalar,
      combine_median_scalar,
  };
  return table;
}

}  // namespace featinv::kernels
