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
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace featinv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mono time-domain audio. Samples are dimensionless with nominal range
// [-1, 1); sample_rate is in Hz.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const;
  // Throws Error on non-positive rate or non-finite samples.
  void validate() const;
};

enum class WindowKind { kHann, kRectangular };

const char* to_string(WindowKind kind);
WindowKind parse_window_kind(const std::string& name);

struct StftParams {
  int frame_len = 1024;
  int hop = 256;
  WindowKind window = WindowKind::kHann;

  int bins() const { return frame_len / 2 + 1; }
  void validate() const;  // requires 0 < hop <= frame_len

  bool operator==(const StftParams&) const = default;
};

// One-sided complex spectrogram of a real signal, stored column-major
// (one contiguous column of `bins` values per frame).
struct ComplexSpectrogram {
  std::vector<std::complex<double>> values;
  StftParams params;
  int bins = 0;
  std::size_t frames = 0;
  int sample_rate = 0;

  std::complex<double>* col(std::size_t n) { return values.data() + n * bins; }
  const std::complex<double>* col(std::size_t n) const {
    return values.data() + n * bins;
  }
};

// Nonnegative magnitude spectrogram, same layout as ComplexSpectrogram.
struct MagSpectrogram {
  std::vector<double> values;
  StftParams params;
  int bins = 0;
  std::size_t frames = 0;
  int sample_rate = 0;

  double* col(std::size_t n) { return values.data() + n * bins; }
  const double* col(std::size_t n) const { return values.data() + n * bins; }
  // Throws Error on negative or non-finite entries.
  void validate() const;
};

MagSpectrogram magnitude(const ComplexSpectrogram& c);

// Frame-level features, column-major with one length-dim() column per
// STFT frame. Row order matches `names`.
struct FeatureMatrix {
  std::vector<double> values;
  std::vector<std::string> names;
  StftParams frame_params;
  int sample_rate = 0;
  std::size_t frames = 0;

  std::size_t dim() const { return names.size(); }
  double* col(std::size_t n) { return values.data() + n * dim(); }
  const double* col(std::size_t n) const { return values.data() + n * dim(); }
  double& at(std::size_t row, std::size_t frame) {
    return values[frame * dim() + row];
  }
  double at(std::size_t row, std::size_t frame) const {
    return values[frame * dim() + row];
  }
};

// A contiguous slice of one audio file, in samples. Segments produced by
// the onset segmenter tile their file without gaps or overlap.
struct Segment {
  long long start = 0;
  long long length = 0;
};

inline constexpr int kChromaDim = 12;
inline constexpr int kTimbreDim = 12;
inline constexpr int kSegmentFeatureDim = 27;

// Per-segment feature vector: 12 chroma, 12 timbre, loudness at segment
// start, loudness at peak, and the peak position as a fraction of the
// segment duration. flatten() yields the fixed f1..f27 order.
struct SegmentFeatureVector {
  std::array<double, kChromaDim> chroma{};
  std::array<double, kTimbreDim> timbre{};
  double loudness_start = 0.0;
  double loudness_peak = 0.0;
  double peak_position = 0.0;

  std::array<double, kSegmentFeatureDim> flatten() const;
  static SegmentFeatureVector from_flat(const double* values);
};

// Frame-feature ladders (cumulative sets of 3/8/11/21 features) plus the
// 27-dimensional per-segment vector.
enum class FeatureSet { kLadder3, kLadder8, kLadder11, kLadder21, kMsd27 };

std::size_t feature_dim(FeatureSet set);
const std::vector<std::string>& feature_names(FeatureSet set);
const char* to_string(FeatureSet set);
FeatureSet parse_feature_set(const std::string& name);

}  // namespace featinv
