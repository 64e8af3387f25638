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

#include "featinv/types.hpp"

#include <cmath>
#include <cstddef>

namespace featinv {

double Waveform::duration_seconds() const {
  return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                         : 0.0;
}

void Waveform::validate() const {
  if (sample_rate <= 0) throw Error("waveform sample rate must be positive");
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error("waveform contains NaN or Inf samples");
  }
}

const char* to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann:
      return "hann";
    case WindowKind::kRectangular:
      return "rectangular";
  }
  return "unknown";
}

WindowKind parse_window_kind(const std::string& name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "rectangular" || name == "rect") return WindowKind::kRectangular;
  throw Error("unknown window kind: " + name);
}

void StftParams::validate() const {
  if (frame_len <= 0) throw Error("frame_len must be positive");
  if (hop <= 0 || hop > frame_len) {
    throw Error("hop must satisfy 0 < hop <= frame_len");
  }
}

void MagSpectrogram::validate() const {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error("magnitude spectrogram entries must be finite and >= 0");
    }
  }
}

MagSpectrogram magnitude(const ComplexSpectrogram& c) {
  MagSpectrogram m;
  m.params = c.params;
  m.bins = c.bins;
  m.frames = c.frames;
  m.sample_rate = c.sample_rate;
  m.values.resize(c.values.size());
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    m.values[i] = std::abs(c.values[i]);
  }
  return m;
}

std::array<double, kSegmentFeatureDim> SegmentFeatureVector::flatten() const {
  std::array<double, kSegmentFeatureDim> out{};
  for (int j = 0; j < kChromaDim; ++j) out[j] = chroma[j];
  for (int j = 0; j < kTimbreDim; ++j) out[kChromaDim + j] = timbre[j];
  out[24] = loudness_start;
  out[25] = loudness_peak;
  out[26] = peak_position;
  return out;
}

SegmentFeatureVector SegmentFeatureVector::from_flat(const double* values) {
  SegmentFeatureVector v;
  for (int j = 0; j < kChromaDim; ++j) v.chroma[j] = values[j];
  for (int j = 0; j < kTimbreDim; ++j) v.timbre[j] = values[kChromaDim + j];
  v.loudness_start = values[24];
  v.loudness_peak = values[25];
  v.peak_position = values[26];
  return v;
}

// The ladder ids follow the published labels (3/8/11/21); the enumerated
// feature lists are cumulative and actually hold 3, 7, 10 and 20 entries.
std::size_t feature_dim(FeatureSet set) {
  switch (set) {
    case FeatureSet::kLadder3:
      return 3;
    case FeatureSet::kLadder8:
      return 7;
    case FeatureSet::kLadder11:
      return 10;
    case FeatureSet::kLadder21:
      return 20;
    case FeatureSet::kMsd27:
      return kSegmentFeatureDim;
  }
  throw Error("unknown feature set");
}

namespace {

std::vector<std::string> ladder_names(std::size_t m) {
  static const std::vector<std::string> full = {
      "zcr",           "odf",    "energy", "spectral_slope",
      "spectral_centroid", "spectral_spread", "spectral_flux",
      "mfcc1",  "mfcc2",  "mfcc3",  "mfcc4",  "mfcc5",  "mfcc6",
      "mfcc7",  "mfcc8",  "mfcc9",  "mfcc10", "mfcc11", "mfcc12", "mfcc13"};
  return {full.begin(), full.begin() + m};
}

std::vector<std::string> msd_names() {
  std::vector<std::string> names;
  for (int j = 1; j <= kChromaDim; ++j) {
    names.push_back("chroma" + std::to_string(j));
  }
  for (int j = 1; j <= kTimbreDim; ++j) {
    names.push_back("timbre" + std::to_string(j));
  }
  names.push_back("loudness_start");
  names.push_back("loudness_peak");
  names.push_back("loudness_peak_position");
  return names;
}

}  // namespace

const std::vector<std::string>& feature_names(FeatureSet set) {
  static const std::vector<std::string> l3 = ladder_names(3);
  static const std::vector<std::string> l8 = ladder_names(7);
  static const std::vector<std::string> l11 = ladder_names(10);
  static const std::vector<std::string> l21 = ladder_names(20);
  static const std::vector<std::string> msd = msd_names();
  switch (set) {
    case FeatureSet::kLadder3:
      return l3;
    case FeatureSet::kLadder8:
      return l8;
    case FeatureSet::kLadder11:
      return l11;
    case FeatureSet::kLadder21:
      return l21;
    case FeatureSet::kMsd27:
      return msd;
  }
  throw Error("unknown feature set");
}

const char* to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::kLadder3:
      return "3";
    case FeatureSet::kLadder8:
      return "8";
    case FeatureSet::kLadder11:
      return "11";
    case FeatureSet::kLadder21:
      return "21";
    case FeatureSet::kMsd27:
      return "msd27";
  }
  return "unknown";
}

FeatureSet parse_feature_set(const std::string& name) {
  if (name == "3") return FeatureSet::kLadder3;
  if (name == "8") return FeatureSet::kLadder8;
  if (name == "11") return FeatureSet::kLadder11;
  if (name == "21") return FeatureSet::kLadder21;
  if (name == "msd27") return FeatureSet::kMsd27;
  throw Error("unknown feature set: " + name);
}

}  // namespace featinv
