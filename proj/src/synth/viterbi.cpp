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

#include <limits>

#include "featinv/parallel.hpp"
#include "featinv/synth.hpp"

namespace featinv {

CandidateGrid build_candidate_grid(const SegmentTarget& target,
                                   const DevDatabase& db,
                                   const SynthConfig& cfg) {
  const std::size_t p = cfg.neighbors;
  if (p > db.size()) {
    throw Error("P=" + std::to_string(p) + " exceeds database size " +
                std::to_string(db.size()));
  }
  const WeightVector w = cfg.weights.w.empty()
                             ? WeightVector::ones(db.dim)
                             : cfg.weights;
  CandidateGrid grid;
  grid.rows = target.segments.size();
  grid.p = p;
  grid.candidates.resize(grid.rows * p);
  grid.scores.resize(grid.rows * p);
  parallel_for(grid.rows, [&](std::size_t i) {
    const NeighborSet nn = knn(target.std_row(i), db, p, w);
    for (std::size_t k = 0; k < p; ++k) {
      grid.candidates[i * p + k] = nn.indices[k];
      grid.scores[i * p + k] = nn.distances[k];
    }
  });
  return grid;
}

std::vector<std::size_t> viterbi_path(const CandidateGrid& grid,
                                      const DevDatabase& db, double lambda_v) {
  if (grid.rows == 0 || grid.p == 0) throw Error("empty candidate grid");
  if (lambda_v < 0.0) throw Error("lambda_v must be nonnegative");
  const std::size_t rows = grid.rows;
  const std::size_t p = grid.p;

  const auto file_of = [&](std::size_t i, std::size_t k) {
    return db.entries[grid.candidate(i, k)].file_index;
  };

  // Backward cost-to-go, then a forward pass that greedily picks the
  // smallest candidate index achieving the optimum, which yields the
  // lexicographically smallest optimal sequence.
  std::vector<double> cost_to_go(rows * p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    cost_to_go[(rows - 1) * p + k] = grid.score(rows - 1, k);
  }
  for (std::size_t i = rows - 1; i-- > 0;) {
    for (std::size_t k = 0; k < p; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < p; ++q) {
        const double trans =
            file_of(i, k) == file_of(i + 1, q) ? 0.0 : lambda_v;
        const double c = trans + cost_to_go[(i + 1) * p + q];
        if (c < best) best = c;
      }
      cost_to_go[i * p + k] = grid.score(i, k) + best;
    }
  }

  std::vector<std::size_t> path(rows);
  std::size_t pick = 0;
  for (std::size_t k = 1; k < p; ++k) {
    if (cost_to_go[k] < cost_to_go[pick]) pick = k;
  }
  path[0] = pick;
  for (std::size_t i = 1; i < rows; ++i) {
    const std::size_t prev = path[i - 1];
    std::size_t best_q = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < p; ++q) {
      const double trans =
          file_of(i - 1, prev) == file_of(i, q) ? 0.0 : lambda_v;
      const double c = trans + cost_to_go[i * p + q];
      if (c < best) {
        best = c;
        best_q = q;
      }
    }
    path[i] = best_q;
  }

  std::vector<std::size_t> entry_path(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    entry_path[i] = grid.candidate(i, path[i]);
  }
  return entry_path;
}

}  // namespace featinv
