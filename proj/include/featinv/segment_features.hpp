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

#include <array>
#include <vector>

#include "featinv/types.hpp"

namespace featinv {

// Internal analysis framing for the per-segment descriptors.
inline constexpr int kSegmentFrameLen = 256;
inline constexpr int kSegmentHop = 64;
inline constexpr int kTimbreMelBands = 23;
inline constexpr int kTimbrePatchFrames = 8;

// Spectral energy folded onto the 12 pitch classes (C..B), peak-normalized
// to 1 when any energy exists; silence yields the zero vector.
std::array<double, kChromaDim> chroma(const Waveform& segment);

// Spectro-temporal shape descriptor: the segment's log-mel power
// spectrogram (23 bands) is resampled to a fixed 23x8 patch and projected
// onto the first 12 two-dimensional DCT basis functions, ordered by
// ascending (band index + time index), ties by band index. Coefficient 1
// is the patch mean.
std::array<double, kTimbreDim> timbre_surrogate(const Waveform& segment);

struct LoudnessTriple {
  double start = 0.0;
  double peak = 0.0;
  double peak_position = 0.0;  // fraction of the segment duration, [0, 1]
};

// Frame-wise loudness 10*log10(frame energy + eps); start value, peak
// value, and the earliest peak frame's center as a duration fraction.
LoudnessTriple loudness_triple(const Waveform& segment);

// Per-segment [chroma | timbre | loudness] vectors in f1..f27 order;
// output[i] corresponds to segs[i].
std::vector<SegmentFeatureVector> segment_features(
    const Waveform& w, const std::vector<Segment>& segs);

}  // namespace featinv
