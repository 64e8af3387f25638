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

#include "featinv/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace featinv {
namespace {

inline constexpr int kSincTaps = 16;  // one-sided, at the narrower rate

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Hann taper over [-1, 1].
double taper(double u) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return 0.5 + 0.5 * std::cos(std::numbers::pi * u);
}

}  // namespace

Waveform time_stretch(const Waveform& s, long long target_len) {
  if (s.samples.empty()) throw Error("time_stretch requires a nonempty input");
  if (target_len < 1) throw Error("time_stretch target length must be >= 1");
  const long long in_len = static_cast<long long>(s.samples.size());
  if (target_len == in_len) return s;

  Waveform out;
  out.sample_rate = s.sample_rate;
  out.samples.assign(static_cast<std::size_t>(target_len), 0.0);

  const double step = static_cast<double>(in_len) / target_len;
  // Downsampling lowers the cutoff and widens the kernel accordingly.
  const double cutoff = std::min(1.0, 1.0 / step);
  const double half_width = kSincTaps / cutoff;

  for (long long i = 0; i < target_len; ++i) {
    const double pos = i * step;
    const long long k0 =
        std::max<long long>(0, static_cast<long long>(
                                   std::ceil(pos - half_width)));
    const long long k1 =
        std::min<long long>(in_len - 1, static_cast<long long>(
                                            std::floor(pos + half_width)));
    double acc = 0.0;
    double weight = 0.0;
    for (long long k = k0; k <= k1; ++k) {
      const double t = k - pos;
      const double v = cutoff * sinc(cutoff * t) * taper(t / half_width);
      acc += v * s.samples[k];
      weight += v;
    }
    out.samples[i] = weight > 1e-12 ? acc / weight : 0.0;
  }
  return out;
}

void resample_matrix_columns(const double* in, std::size_t rows,
                             std::size_t cols, double* out,
                             std::size_t new_cols) {
  if (rows == 0 || cols == 0 || new_cols == 0) {
    throw Error("resample_matrix_columns requires nonempty dimensions");
  }
  const double ratio =
      new_cols > 1 ? static_cast<double>(cols - 1) / (new_cols - 1) : 0.0;
  for (std::size_t t = 0; t < new_cols; ++t) {
    const double pos = t * ratio;
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, cols - 1);
    const double frac = pos - static_cast<double>(lo);
    const double* a = in + lo * rows;
    const double* b = in + hi * rows;
    double* o = out + t * rows;
    for (std::size_t r = 0; r < rows; ++r) {
      o[r] = a[r] + frac * (b[r] - a[r]);
    }
  }
}

MagSpectrogram resample_columns(const MagSpectrogram& m,
                                std::size_t new_frames) {
  if (new_frames == m.frames) return m;
  MagSpectrogram out;
  out.params = m.params;
  out.bins = m.bins;
  out.frames = new_frames;
  out.sample_rate = m.sample_rate;
  out.values.resize(new_frames * static_cast<std::size_t>(m.bins));
  resample_matrix_columns(m.values.data(), static_cast<std::size_t>(m.bins),
                          m.frames, out.values.data(), new_frames);
  return out;
}

}  // namespace featinv
