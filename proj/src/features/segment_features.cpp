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

#include "featinv/segment_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "featinv/fft.hpp"
#include "featinv/frame_features.hpp"
#include "featinv/parallel.hpp"
#include "featinv/resample.hpp"
#include "featinv/stft.hpp"

namespace featinv {
namespace {

inline constexpr double kChromaMinHz = 55.0;
inline constexpr double kChromaMaxHz = 5000.0;

StftParams segment_analysis_params() {
  StftParams p;
  p.frame_len = kSegmentFrameLen;
  p.hop = kSegmentHop;
  p.window = WindowKind::kHann;
  return p;
}

int pitch_class(double hz) {
  const int semitones =
      static_cast<int>(std::lround(12.0 * std::log2(hz / 440.0)));
  // A4 = 440 Hz sits at pitch class 9 (C = 0).
  return ((semitones % 12) + 12 + 9) % 12;
}

}  // namespace

std::array<double, kChromaDim> chroma(const Waveform& segment) {
  if (segment.samples.empty()) throw Error("chroma requires a nonempty segment");
  if (segment.sample_rate <= 0) throw Error("chroma needs a sample rate");
  std::array<double, kChromaDim> out{};

  const std::size_t len = segment.samples.size();
  const std::size_t n_fft = next_pow2(std::max<std::size_t>(len, 4096));
  std::vector<double> buf(n_fft, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    const double win =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / len);
    buf[i] = segment.samples[i] * win;
  }
  RealFft fft(static_cast<int>(n_fft));
  std::vector<std::complex<double>> spec(fft.bins());
  fft.forward(buf.data(), spec.data());

  const double bin_hz = static_cast<double>(segment.sample_rate) / n_fft;
  const double max_hz =
      std::min(kChromaMaxHz, 0.999 * segment.sample_rate / 2.0);
  for (int k = 1; k < fft.bins(); ++k) {
    const double f = k * bin_hz;
    if (f < kChromaMinHz || f > max_hz) continue;
    out[pitch_class(f)] += std::norm(spec[k]);
  }
  const double peak = *std::max_element(out.begin(), out.end());
  if (peak > 0.0) {
    for (double& v : out) v /= peak;
  }
  return out;
}

std::array<double, kTimbreDim> timbre_surrogate(const Waveform& segment) {
  if (segment.samples.empty()) {
    throw Error("timbre_surrogate requires a nonempty segment");
  }
  const StftParams p = segment_analysis_params();
  const MagSpectrogram mag = slice_magnitude(
      segment, 0, static_cast<long long>(segment.samples.size()), p);

  const MelFilterbank bank(kTimbreMelBands, mag.bins, segment.sample_rate,
                           p.frame_len);
  std::vector<double> patch(static_cast<std::size_t>(kTimbreMelBands) *
                            mag.frames);
  std::vector<double> mel(kTimbreMelBands);
  for (std::size_t n = 0; n < mag.frames; ++n) {
    bank.apply(mag.col(n), mel.data());
    for (int b = 0; b < kTimbreMelBands; ++b) {
      patch[n * kTimbreMelBands + b] = 10.0 * std::log10(mel[b] + kEnergyFloor);
    }
  }
  std::vector<double> fixed(static_cast<std::size_t>(kTimbreMelBands) *
                            kTimbrePatchFrames);
  resample_matrix_columns(patch.data(), kTimbreMelBands, mag.frames,
                          fixed.data(), kTimbrePatchFrames);

  // Basis order: ascending (band index p + time index q), ties by p.
  static constexpr int kBasis[kTimbreDim][2] = {
      {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0},
      {0, 3}, {1, 2}, {2, 1}, {3, 0}, {0, 4}, {1, 3}};
  std::array<double, kTimbreDim> out{};
  const double norm = 1.0 / (kTimbreMelBands * kTimbrePatchFrames);
  for (int c = 0; c < kTimbreDim; ++c) {
    const int p_band = kBasis[c][0];
    const int q_time = kBasis[c][1];
    double acc = 0.0;
    for (int t = 0; t < kTimbrePatchFrames; ++t) {
      const double ct = std::cos(std::numbers::pi * q_time * (t + 0.5) /
                                 kTimbrePatchFrames);
      const double* col = fixed.data() + static_cast<std::size_t>(t) *
                                             kTimbreMelBands;
      for (int b = 0; b < kTimbreMelBands; ++b) {
        acc += col[b] * ct *
               std::cos(std::numbers::pi * p_band * (b + 0.5) /
                        kTimbreMelBands);
      }
    }
    out[c] = acc * norm;
  }
  return out;
}

LoudnessTriple loudness_triple(const Waveform& segment) {
  if (segment.samples.empty()) {
    throw Error("loudness_triple requires a nonempty segment");
  }
  const long long len = static_cast<long long>(segment.samples.size());
  const StftParams p = segment_analysis_params();
  const std::size_t n_frames = frames_for_length(len, p);

  LoudnessTriple out;
  double peak_energy = -1.0;
  std::size_t peak_frame = 0;
  for (std::size_t n = 0; n < n_frames; ++n) {
    const long long start = static_cast<long long>(n) * p.hop;
    double energy = 0.0;
    for (int i = 0; i < p.frame_len; ++i) {
      const long long t = start + i;
      if (t >= len) break;
      energy += segment.samples[t] * segment.samples[t];
    }
    const double loud = 10.0 * std::log10(energy + kEnergyFloor);
    if (n == 0) out.start = loud;
    if (energy > peak_energy) {
      peak_energy = energy;
      peak_frame = n;
      out.peak = loud;
    }
  }
  const double center =
      static_cast<double>(peak_frame) * p.hop + p.frame_len / 2.0;
  out.peak_position = std::clamp(center / static_cast<double>(len), 0.0, 1.0);
  return out;
}

std::vector<SegmentFeatureVector> segment_features(
    const Waveform& w, const std::vector<Segment>& segs) {
  const long long len = static_cast<long long>(w.samples.size());
  long long prev_end = 0;
  for (const Segment& s : segs) {
    if (s.start < prev_end || s.length < 1 || s.start + s.length > len) {
      throw Error("segments must be ordered, non-overlapping and in bounds");
    }
    prev_end = s.start + s.length;
  }

  std::vector<SegmentFeatureVector> out(segs.size());
  parallel_for(segs.size(), [&](std::size_t i) {
    const Segment& s = segs[i];
    Waveform slice;
    slice.sample_rate = w.sample_rate;
    slice.samples.assign(w.samples.begin() + s.start,
                         w.samples.begin() + s.start + s.length);
    SegmentFeatureVector v;
    v.chroma = chroma(slice);
    v.timbre = timbre_surrogate(slice);
    const LoudnessTriple loud = loudness_triple(slice);
    v.loudness_start = loud.start;
    v.loudness_peak = loud.peak;
    v.peak_position = loud.peak_position;
    out[i] = v;
  });
  return out;
}

}  // namespace featinv
