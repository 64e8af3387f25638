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

#include <vector>

#include "featinv/types.hpp"

namespace featinv {

inline constexpr double kMinOnsetGapSeconds = 0.050;

// Onset-based segmentation: peaks of the smoothed half-wave-rectified
// spectral flux, thresholded at median + one standard deviation, with a
// 50 ms minimum inter-onset gap. The segments tile [0, len(w)) without
// gaps; silence yields a single whole-signal segment.
std::vector<Segment> segment_onsets(const Waveform& w, const StftParams& p);

}  // namespace featinv
