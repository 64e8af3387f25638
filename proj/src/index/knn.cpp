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

#include "featinv/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "featinv/kernels.hpp"

namespace featinv {

void WeightVector::validate() const {
  bool any_positive = false;
  for (double v : w) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error("weights must be finite and nonnegative");
    }
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive) throw Error("at least one weight must be positive");
}

WeightVector WeightVector::ones(std::size_t dim) {
  return WeightVector{std::vector<double>(dim, 1.0)};
}

WeightVector WeightVector::for_groups(bool use_chroma, bool use_timbre,
                                      bool use_loudness) {
  WeightVector wv{std::vector<double>(kSegmentFeatureDim, 0.0)};
  if (use_chroma) std::fill(wv.w.begin(), wv.w.begin() + 12, 1.0);
  if (use_timbre) std::fill(wv.w.begin() + 12, wv.w.begin() + 24, 1.0);
  if (use_loudness) std::fill(wv.w.begin() + 24, wv.w.end(), 1.0);
  wv.validate();
  return wv;
}

double weighted_distance(const std::vector<double>& f,
                         const std::vector<double>& g, const WeightVector& w) {
  if (f.size() != g.size() || f.size() != w.w.size()) {
    throw Error("weighted_distance: dimension mismatch");
  }
  return std::sqrt(
      kernels::weighted_squared_distance(f.data(), g.data(), w.w.data(),
                                         f.size()));
}

NeighborSet knn(const double* query, const DevDatabase& db, std::size_t p,
                const WeightVector& w) {
  const std::size_t n = db.size();
  if (n == 0) throw Error("knn on an empty database");
  if (p < 1 || p > n) {
    throw Error("knn requires 1 <= P <= N (P=" + std::to_string(p) +
                ", N=" + std::to_string(n) + ")");
  }
  if (w.w.size() != db.dim) throw Error("knn: weight dimension mismatch");
  w.validate();

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = kernels::weighted_squared_distance(query, db.row(i), w.w.data(),
                                               db.dim);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto closer = [&d2](std::size_t a, std::size_t b) {
    return d2[a] != d2[b] ? d2[a] < d2[b] : a < b;
  };
  std::nth_element(order.begin(), order.begin() + (p - 1), order.end(),
                   closer);
  std::sort(order.begin(), order.begin() + p, closer);

  NeighborSet out;
  out.indices.assign(order.begin(), order.begin() + p);
  out.distances.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    out.distances[i] = std::sqrt(d2[out.indices[i]]);
  }
  return out;
}

NeighborSet knn(const std::vector<double>& query, const DevDatabase& db,
                std::size_t p, const WeightVector& w) {
  if (query.size() != db.dim) throw Error("knn: query dimension mismatch");
  return knn(query.data(), db, p, w);
}

}  // namespace featinv
