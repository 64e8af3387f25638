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
#include <vector>

#include "featinv/database.hpp"
#include "featinv/types.hpp"

namespace featinv {

// Nonnegative per-feature weights for the distance kernel; at least one
// weight must be positive.
struct WeightVector {
  std::vector<double> w;

  void validate() const;
  static WeightVector ones(std::size_t dim);
  // MSD feature-group selection: unit weight on the chosen blocks of the
  // 27-dimensional vector (chroma 1-12, timbre 13-24, loudness 25-27).
  static WeightVector for_groups(bool use_chroma, bool use_timbre,
                                 bool use_loudness);
};

// sqrt(sum_j w_j (f_j - g_j)^2); with unit weights this is the plain
// Euclidean distance.
double weighted_distance(const std::vector<double>& f,
                         const std::vector<double>& g, const WeightVector& w);

struct NeighborSet {
  std::vector<std::size_t> indices;   // entry indices, distance-ascending
  std::vector<double> distances;      // same order
};

// Exact P nearest entries to a query already standardized with db.stats.
// Flat scan with partial selection; equal distances break ties by
// ascending entry index.
NeighborSet knn(const double* query, const DevDatabase& db, std::size_t p,
                const WeightVector& w);
NeighborSet knn(const std::vector<double>& query, const DevDatabase& db,
                std::size_t p, const WeightVector& w);

}  // namespace featinv
