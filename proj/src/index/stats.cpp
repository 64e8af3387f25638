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

#include "featinv/stats.hpp"

#include <cmath>

namespace featinv {

StandardizationStats compute_stats(const double* rows, std::size_t n,
                                   std::size_t dim) {
  if (n < 2) throw Error("compute_stats requires at least 2 vectors");
  if (dim == 0) throw Error("compute_stats requires a positive dimension");
  StandardizationStats stats;
  stats.mu.assign(dim, 0.0);
  stats.sigma.assign(dim, 0.0);
  stats.degenerate.assign(dim, false);

  for (std::size_t i = 0; i < n; ++i) {
    const double* row = rows + i * dim;
    for (std::size_t j = 0; j < dim; ++j) stats.mu[j] += row[j];
  }
  for (std::size_t j = 0; j < dim; ++j) stats.mu[j] /= static_cast<double>(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double* row = rows + i * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = row[j] - stats.mu[j];
      stats.sigma[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    stats.sigma[j] = std::sqrt(stats.sigma[j] / static_cast<double>(n));
    if (stats.sigma[j] < 1e-12) {
      stats.sigma[j] = 1.0;
      stats.degenerate[j] = true;
    }
  }
  return stats;
}

StandardizationStats compute_stats(
    const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw Error("compute_stats requires at least 2 vectors");
  const std::size_t dim = rows[0].size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw Error("compute_stats rows differ in dimension");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return compute_stats(flat.data(), rows.size(), dim);
}

void standardize(const double* f, const StandardizationStats& stats,
                 double* out) {
  for (std::size_t j = 0; j < stats.dim(); ++j) {
    out[j] = (f[j] - stats.mu[j]) / stats.sigma[j];
  }
}

std::vector<double> standardize(const std::vector<double>& f,
                                const StandardizationStats& stats) {
  if (f.size() != stats.dim()) {
    throw Error("standardize: dimension mismatch");
  }
  std::vector<double> out(f.size());
  standardize(f.data(), stats, out.data());
  return out;
}

std::vector<double> unstandardize(const std::vector<double>& f,
                                  const StandardizationStats& stats) {
  if (f.size() != stats.dim()) {
    throw Error("unstandardize: dimension mismatch");
  }
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] = f[j] * stats.sigma[j] + stats.mu[j];
  }
  return out;
}

}  // namespace featinv
