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

#include "featinv/frame_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "featinv/kernels.hpp"
#include "featinv/stft.hpp"

namespace featinv {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(int n_bands_in, int bins_in, int sample_rate,
                             int frame_len)
    : n_bands(n_bands_in), bins(bins_in) {
  if (n_bands < 1 || bins < 2) throw Error("invalid mel filterbank shape");
  weights.assign(static_cast<std::size_t>(n_bands) * bins, 0.0);
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(n_bands) + 2);
  for (int e = 0; e < n_bands + 2; ++e) {
    edges[e] = mel_to_hz(mel_max * e / (n_bands + 1));
  }
  const double bin_hz = static_cast<double>(sample_rate) / frame_len;
  for (int b = 0; b < n_bands; ++b) {
    const double left = edges[b];
    const double center = edges[b + 1];
    const double right = edges[b + 2];
    double* row = weights.data() + static_cast<std::size_t>(b) * bins;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f < right) {
        w = f <= center ? (f - left) / (center - left)
                        : (right - f) / (right - center);
      }
      row[k] = w;
    }
  }
}

void MelFilterbank::apply(const double* mag_col, double* out) const {
  for (int b = 0; b < n_bands; ++b) {
    const double* row = band(b);
    double acc = 0.0;
    for (int k = 0; k < bins; ++k) acc += row[k] * mag_col[k] * mag_col[k];
    out[b] = acc;
  }
}

void dct2(const double* in, std::size_t n, int first, int count, double* out) {
  for (int c = 0; c < count; ++c) {
    const int k = first + c;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += in[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    }
    out[c] = acc;
  }
}

std::vector<double> spectral_flux(const MagSpectrogram& m) {
  std::vector<double> flux(m.frames, 0.0);
  for (std::size_t n = 1; n < m.frames; ++n) {
    flux[n] = std::sqrt(
        kernels::squared_diff_sum(m.col(n), m.col(n - 1), m.bins));
  }
  return flux;
}

std::vector<double> onset_detection_function(const MagSpectrogram& m) {
  std::vector<double> odf(m.frames, 0.0);
  for (std::size_t n = 1; n < m.frames; ++n) {
    const double* cur = m.col(n);
    const double* prev = m.col(n - 1);
    double acc = 0.0;
    for (int k = 0; k < m.bins; ++k) acc += std::max(0.0, cur[k] - prev[k]);
    odf[n] = acc;
  }
  return odf;
}

FeatureMatrix mfcc(const MagSpectrogram& m, int n_mels, int n_coeffs) {
  if (n_coeffs < 1 || n_coeffs > n_mels) {
    throw Error("mfcc requires 1 <= n_coeffs <= n_mels");
  }
  if (m.sample_rate <= 0) throw Error("mfcc needs a sample rate");
  FeatureMatrix out;
  out.frame_params = m.params;
  out.sample_rate = m.sample_rate;
  out.frames = m.frames;
  for (int c = 1; c <= n_coeffs; ++c) {
    out.names.push_back("mfcc" + std::to_string(c));
  }
  out.values.resize(out.frames * out.dim());

  const MelFilterbank bank(n_mels, m.bins, m.sample_rate, m.params.frame_len);
  std::vector<double> mel(static_cast<std::size_t>(n_mels));
  for (std::size_t n = 0; n < m.frames; ++n) {
    bank.apply(m.col(n), mel.data());
    for (int b = 0; b < n_mels; ++b) mel[b] = std::log(mel[b] + kEnergyFloor);
    dct2(mel.data(), mel.size(), 1, n_coeffs, out.col(n));
  }
  return out;
}

namespace {

double zero_crossing_rate(const double* frame, int len) {
  if (len < 2) return 0.0;
  int crossings = 0;
  for (int i = 1; i < len; ++i) {
    if (frame[i - 1] * frame[i] < 0.0) ++crossings;
  }
  return static_cast<double>(crossings) / (len - 1);
}

}  // namespace

FeatureMatrix frame_features(const Waveform& w, const StftParams& p,
                             FeatureSet set) {
  if (set == FeatureSet::kMsd27) {
    throw Error("frame_features requires a ladder feature set (3/8/11/21)");
  }
  const std::size_t dim = feature_dim(set);
  const ComplexSpectrogram c = stft(w, p);
  const MagSpectrogram mag = magnitude(c);

  FeatureMatrix out;
  out.names = feature_names(set);
  out.frame_params = p;
  out.sample_rate = w.sample_rate;
  out.frames = mag.frames;
  out.values.resize(out.frames * dim);

  const std::vector<double> odf = onset_detection_function(mag);
  std::vector<double> frame(static_cast<std::size_t>(p.frame_len));
  const long long len = static_cast<long long>(w.samples.size());

  // Rows 0..2: zcr, odf, frame energy, from the raw (unwindowed) frames.
  for (std::size_t n = 0; n < out.frames; ++n) {
    const long long start = static_cast<long long>(n) * p.hop;
    for (int i = 0; i < p.frame_len; ++i) {
      const long long t = start + i;
      frame[i] = t < len ? w.samples[t] : 0.0;
    }
    out.at(0, n) = zero_crossing_rate(frame.data(), p.frame_len);
    out.at(1, n) = odf[n];
    out.at(2, n) = kernels::sum_squares(frame.data(), frame.size());
  }
  if (dim == 3) return out;

  // Rows 3..6: spectral slope, centroid, spread, flux.
  const double bin_hz = static_cast<double>(w.sample_rate) / p.frame_len;
  const int bins = mag.bins;
  double freq_mean = 0.0;
  for (int k = 0; k < bins; ++k) freq_mean += k * bin_hz;
  freq_mean /= bins;
  double freq_var = 0.0;
  for (int k = 0; k < bins; ++k) {
    const double d = k * bin_hz - freq_mean;
    freq_var += d * d;
  }
  const std::vector<double> flux = spectral_flux(mag);
  for (std::size_t n = 0; n < out.frames; ++n) {
    const double* col = mag.col(n);
    const double total = kernels::sum(col, bins);
    double mag_mean = total / bins;
    double cov = 0.0;
    double centroid_num = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      cov += (f - freq_mean) * (col[k] - mag_mean);
      centroid_num += f * col[k];
    }
    const double centroid = centroid_num / (total + kEnergyFloor);
    double spread_num = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double d = k * bin_hz - centroid;
      spread_num += d * d * col[k];
    }
    out.at(3, n) = cov / freq_var;
    out.at(4, n) = centroid;
    out.at(5, n) = std::sqrt(spread_num / (total + kEnergyFloor));
    out.at(6, n) = flux[n];
  }
  if (dim == 7) return out;

  const int n_mfcc = dim == 10 ? 3 : kMfccMaxCoeffs;
  const FeatureMatrix cepstra = mfcc(mag, kMfccMelBands, n_mfcc);
  for (std::size_t n = 0; n < out.frames; ++n) {
    for (int c2 = 0; c2 < n_mfcc; ++c2) out.at(7 + c2, n) = cepstra.at(c2, n);
  }
  return out;
}

}  // namespace featinv
