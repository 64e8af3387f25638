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

#include "featinv/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "featinv/fft.hpp"
#include "featinv/kernels.hpp"

namespace featinv {

std::vector<double> make_window(WindowKind kind, int len) {
  std::vector<double> w(static_cast<std::size_t>(len), 1.0);
  if (kind == WindowKind::kHann) {
    for (int i = 0; i < len; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / len);
    }
  }
  return w;
}

bool is_cola(const StftParams& p) {
  p.validate();
  const std::vector<double> w = make_window(p.window, p.frame_len);
  // Tile enough shifted copies to saturate coverage, then check the
  // steady-state span for constancy.
  const int span = 4 * p.frame_len;
  std::vector<double> coverage(static_cast<std::size_t>(span), 0.0);
  for (int start = 0; start + p.frame_len <= span; start += p.hop) {
    for (int i = 0; i < p.frame_len; ++i) coverage[start + i] += w[i];
  }
  const int lo = p.frame_len;
  const int hi = span - 2 * p.frame_len;
  if (hi <= lo) return false;
  const double ref = coverage[lo];
  if (ref <= 0.0) return false;
  for (int t = lo; t < hi; ++t) {
    if (std::fabs(coverage[t] - ref) > 1e-6 * ref) return false;
  }
  return true;
}

std::size_t frames_for_length(long long len, const StftParams& p) {
  if (len <= p.frame_len) return 1;
  const long long tail = len - p.frame_len;
  return static_cast<std::size_t>(1 + (tail + p.hop - 1) / p.hop);
}

namespace {

// Copies [start, start + frame_len) of `w` into `frame`, zero-padding
// outside the signal.
void load_frame(const Waveform& w, long long start, int frame_len,
                double* frame) {
  const long long n = static_cast<long long>(w.samples.size());
  for (int i = 0; i < frame_len; ++i) {
    const long long t = start + i;
    frame[i] = (t >= 0 && t < n) ? w.samples[t] : 0.0;
  }
}

}  // namespace

ComplexSpectrogram stft(const Waveform& w, const StftParams& p) {
  p.validate();
  w.validate();
  const long long len = static_cast<long long>(w.samples.size());
  if (len < p.frame_len) {
    throw Error("signal of " + std::to_string(len) +
                " samples is shorter than one frame (" +
                std::to_string(p.frame_len) + ")");
  }
  const std::size_t n_frames = frames_for_length(len, p);
  ComplexSpectrogram c;
  c.params = p;
  c.bins = p.bins();
  c.frames = n_frames;
  c.sample_rate = w.sample_rate;
  c.values.resize(n_frames * static_cast<std::size_t>(c.bins));

  const std::vector<double> window = make_window(p.window, p.frame_len);
  RealFft fft(p.frame_len);
  std::vector<double> frame(static_cast<std::size_t>(p.frame_len));
  for (std::size_t n = 0; n < n_frames; ++n) {
    load_frame(w, static_cast<long long>(n) * p.hop, p.frame_len,
               frame.data());
    kernels::multiply(frame.data(), window.data(), frame.data(),
                      frame.size());
    fft.forward(frame.data(), c.col(n));
  }
  return c;
}

Waveform istft(const ComplexSpectrogram& c) {
  c.params.validate();
  if (c.frames == 0) throw Error("empty spectrogram");
  if (!is_cola(c.params)) {
    throw Error(std::string("window '") + to_string(c.params.window) +
                "' with hop " + std::to_string(c.params.hop) +
                " violates constant overlap-add");
  }
  const int frame_len = c.params.frame_len;
  const int hop = c.params.hop;
  const std::size_t out_len =
      (c.frames - 1) * static_cast<std::size_t>(hop) + frame_len;

  const std::vector<double> window = make_window(c.params.window, frame_len);
  RealFft fft(frame_len);
  std::vector<double> frame(static_cast<std::size_t>(frame_len));
  std::vector<double> num(out_len, 0.0);
  std::vector<double> den(out_len, 0.0);
  for (std::size_t n = 0; n < c.frames; ++n) {
    fft.inverse(c.col(n), frame.data());
    const std::size_t offset = n * static_cast<std::size_t>(hop);
    for (int i = 0; i < frame_len; ++i) {
      num[offset + i] += window[i] * frame[i];
      den[offset + i] += window[i] * window[i];
    }
  }
  Waveform out;
  out.sample_rate = c.sample_rate;
  out.samples.resize(out_len);
  for (std::size_t t = 0; t < out_len; ++t) {
    out.samples[t] = den[t] > 1e-12 ? num[t] / den[t] : 0.0;
  }
  return out;
}

MagSpectrogram slice_magnitude(const Waveform& w, long long start,
                               long long len, const StftParams& p) {
  p.validate();
  if (len < 1) throw Error("slice length must be at least 1 sample");
  const std::size_t n_frames = frames_for_length(len, p);
  MagSpectrogram m;
  m.params = p;
  m.bins = p.bins();
  m.frames = n_frames;
  m.sample_rate = w.sample_rate;
  m.values.resize(n_frames * static_cast<std::size_t>(m.bins));

  const std::vector<double> window = make_window(p.window, p.frame_len);
  RealFft fft(p.frame_len);
  std::vector<double> frame(static_cast<std::size_t>(p.frame_len));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(m.bins));
  for (std::size_t n = 0; n < n_frames; ++n) {
    const long long frame_start = start + static_cast<long long>(n) * p.hop;
    load_frame(w, frame_start, p.frame_len, frame.data());
    // Samples past the slice end belong to the next segment; zero them so
    // segment analyses stay independent.
    for (int i = 0; i < p.frame_len; ++i) {
      if (frame_start + i >= start + len) frame[i] = 0.0;
    }
    kernels::multiply(frame.data(), window.data(), frame.data(),
                      frame.size());
    fft.forward(frame.data(), spec.data());
    double* col = m.col(n);
    for (int k = 0; k < m.bins; ++k) col[k] = std::abs(spec[k]);
  }
  return m;
}

void frame_magnitude_column(const Waveform& w, long long start,
                            const StftParams& p, const RealFft& fft,
                            const std::vector<double>& window, double* out) {
  std::vector<double> frame(static_cast<std::size_t>(p.frame_len));
  load_frame(w, start, p.frame_len, frame.data());
  kernels::multiply(frame.data(), window.data(), frame.data(), frame.size());
  std::vector<std::complex<double>> spec(
      static_cast<std::size_t>(p.bins()));
  fft.forward(frame.data(), spec.data());
  for (int k = 0; k < p.bins(); ++k) out[k] = std::abs(spec[k]);
}

}  // namespace featinv
