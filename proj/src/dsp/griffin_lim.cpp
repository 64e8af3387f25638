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

#include "featinv/griffin_lim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "featinv/stft.hpp"

namespace featinv {

Waveform griffin_lim(const MagSpectrogram& m, int n_iter, std::uint64_t seed,
                     std::vector<double>* inconsistency) {
  if (n_iter < 1) throw Error("griffin_lim requires n_iter >= 1");
  m.validate();
  if (m.sample_rate <= 0) {
    throw Error("griffin_lim needs a spectrogram with a sample rate");
  }
  if (inconsistency != nullptr) inconsistency->clear();

  const std::size_t total = m.values.size();
  double mag_norm_sq = 0.0;
  for (double v : m.values) mag_norm_sq += v * v;
  const double mag_norm = std::sqrt(mag_norm_sq);

  ComplexSpectrogram c;
  c.params = m.params;
  c.bins = m.bins;
  c.frames = m.frames;
  c.sample_rate = m.sample_rate;
  c.values.resize(total);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < total; ++i) {
    c.values[i] = std::polar(m.values[i], phase(rng));
  }

  Waveform x;
  for (int it = 0; it < n_iter; ++it) {
    x = istft(c);
    const ComplexSpectrogram s = stft(x, m.params);
    if (inconsistency != nullptr) {
      double diff_sq = 0.0;
      for (std::size_t i = 0; i < total; ++i) {
        const double d = m.values[i] - std::abs(s.values[i]);
        diff_sq += d * d;
      }
      inconsistency->push_back(mag_norm > 0.0 ? std::sqrt(diff_sq) / mag_norm
                                              : 0.0);
    }
    for (std::size_t i = 0; i < total; ++i) {
      c.values[i] = std::polar(m.values[i], std::arg(s.values[i]));
    }
  }
  return x;
}

}  // namespace featinv
