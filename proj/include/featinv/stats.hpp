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

#include "featinv/types.hpp"

namespace featinv {

// Per-dimension mean and population standard deviation of the development
// data. Dimensions whose deviation collapses below 1e-12 are flagged
// degenerate and get sigma = 1, so they contribute zero to distances
// instead of NaN.
struct StandardizationStats {
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<bool> degenerate;

  std::size_t dim() const { return mu.size(); }
};

// Requires at least 2 vectors; `rows` is row-major n x dim.
StandardizationStats compute_stats(const double* rows, std::size_t n,
                                   std::size_t dim);
StandardizationStats compute_stats(
    const std::vector<std::vector<double>>& rows);

void standardize(const double* f, const StandardizationStats& stats,
                 double* out);
std::vector<double> standardize(const std::vector<double>& f,
                                const StandardizationStats& stats);
std::vector<double> unstandardize(const std::vector<double>& f,
                                  const StandardizationStats& stats);

}  // namespace featinv
