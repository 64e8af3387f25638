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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "featinv/database.hpp"
#include "featinv/griffin_lim.hpp"
#include "featinv/knn.hpp"
#include "featinv/types.hpp"

namespace featinv {

enum class SynthMethod {
  kCrossPlain,
  kCrossNormalized,
  kCrossPenalized,
  kAddMedian,
  kAddMean,
  kAddMax,
  kFrameMedian,
};

const char* to_string(SynthMethod method);
SynthMethod parse_synth_method(const std::string& name);
bool is_additive(SynthMethod method);

enum class CombineMode { kMedian, kMean, kMax };

struct SynthConfig {
  SynthMethod method = SynthMethod::kCrossPlain;
  std::size_t neighbors = 10;  // P
  WeightVector weights;        // empty = unit weights at the db dimension
  double lambda_v = 1.0;       // Viterbi file-change penalty
  int gl_iters = kDefaultGriffinLimIters;
  std::uint64_t gl_seed = 0;
  // Optional linear fade-out/fade-in at concatenative segment boundaries
  // (milliseconds, 0 disables). Off by default so self-inversion stays
  // sample-exact.
  double boundary_fade_ms = 0.0;
};

// Synthesis target in segment mode: a tiling segment list with
// standardized 27-dim features. `audio` is present when the target came
// from a waveform; without it, peak amplitudes for Cross-Normalized are
// estimated from the loudness-peak feature.
struct SegmentTarget {
  int sample_rate = 0;
  long long total_length = 0;
  std::vector<Segment> segments;
  std::vector<double> std_features;  // row-major, segments x 27
  std::vector<double> raw_features;  // same shape, pre-standardization
  Waveform audio;                    // empty when unavailable

  const double* std_row(std::size_t i) const {
    return std_features.data() + i * kSegmentFeatureDim;
  }
  const double* raw_row(std::size_t i) const {
    return raw_features.data() + i * kSegmentFeatureDim;
  }
};

// Frame-mode target: standardized ladder features per STFT frame.
struct FrameTarget {
  int sample_rate = 0;
  long long total_length = 0;
  StftParams params;
  std::size_t frames = 0;
  std::size_t dim = 0;
  std::vector<double> std_features;  // row-major, frames x dim

  const double* std_row(std::size_t n) const {
    return std_features.data() + n * dim;
  }
};

struct AnalysisDocument;

SegmentTarget make_segment_target(const Waveform& w, const DevDatabase& db);
// Audio-less target from an analysis document; times are converted to
// samples at the database rate.
SegmentTarget make_segment_target(const AnalysisDocument& doc,
                                  const DevDatabase& db);
FrameTarget make_frame_target(const Waveform& w, const DevDatabase& db);

// P candidates per target segment with their distance scores, row-wise
// ascending.
struct CandidateGrid {
  std::size_t rows = 0;
  std::size_t p = 0;
  std::vector<std::size_t> candidates;  // rows x p entry indices
  std::vector<double> scores;           // rows x p

  std::size_t candidate(std::size_t i, std::size_t k) const {
    return candidates[i * p + k];
  }
  double score(std::size_t i, std::size_t k) const { return scores[i * p + k]; }
};

CandidateGrid build_candidate_grid(const SegmentTarget& target,
                                   const DevDatabase& db,
                                   const SynthConfig& cfg);

// Minimum-cost candidate sequence under node costs v_i^p plus a
// transition cost of lambda_v whenever consecutive picks come from
// different source files (0 otherwise). Ties resolve to the
// lexicographically smallest candidate-index sequence. Returns one entry
// index per row.
std::vector<std::size_t> viterbi_path(const CandidateGrid& grid,
                                      const DevDatabase& db, double lambda_v);

// Concatenative methods. Cross-Plain places raw 1-NN audio (truncated or
// zero-padded to the slot); Cross-Normalized time-stretches to the slot
// and matches the target peak amplitude; Cross-Penalized renders the
// Viterbi selection with the normalized placement rules.
Waveform cross_plain(const SegmentTarget& target, const DevDatabase& db,
                     const SynthConfig& cfg);
Waveform cross_normalized(const SegmentTarget& target, const DevDatabase& db,
                          const SynthConfig& cfg);
Waveform cross_penalized(const SegmentTarget& target, const DevDatabase& db,
                         const SynthConfig& cfg);

// Elementwise combine of spectrograms sharing one shape.
MagSpectrogram add_combine(std::span<const MagSpectrogram> spectra,
                           CombineMode mode);

// Combined magnitude estimate before phase reconstruction: per segment,
// the P neighbors' magnitude spectrograms are time-resampled to the
// target segment's frame count and combined, then concatenated.
MagSpectrogram additive_estimate(const SegmentTarget& target,
                                 const DevDatabase& db,
                                 const SynthConfig& cfg);

// Frame-mode magnitude estimate: per test frame, the elementwise median
// of the P nearest development frames' spectra.
MagSpectrogram frame_median_estimate(const FrameTarget& target,
                                     const DevDatabase& db,
                                     const SynthConfig& cfg);

// Magnitude estimate followed by one global Griffin-Lim pass, trimmed to
// the target length.
Waveform additive_synthesize(const SegmentTarget& target,
                             const DevDatabase& db, const SynthConfig& cfg);
Waveform additive_synthesize(const FrameTarget& target, const DevDatabase& db,
                             const SynthConfig& cfg);

}  // namespace featinv
