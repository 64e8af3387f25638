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

#include <cstddef>
#include <vector>

#include "featinv/types.hpp"

namespace featinv {

// Energy floor applied before every logarithm so silence stays finite.
inline constexpr double kEnergyFloor = 1e-10;

inline constexpr int kMfccMelBands = 26;
inline constexpr int kMfccMaxCoeffs = 13;

// Triangular mel filterbank over the one-sided power spectrum of a
// frame_len FFT. Weights are dense, one row of `bins` values per band.
struct MelFilterbank {
  int n_bands = 0;
  int bins = 0;
  std::vector<double> weights;

  MelFilterbank(int n_bands, int bins, int sample_rate, int frame_len);
  const double* band(int b) const { return weights.data() + b * bins; }
  // Band energies of a magnitude column (power = magnitude squared).
  void apply(const double* mag_col, double* out) const;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Unnormalized type-II DCT: out[k] = sum_j in[j] cos(pi k (j + 0.5) / n),
// for k in [first, first + count).
void dct2(const double* in, std::size_t n, int first, int count, double* out);

// L2 spectral flux per frame, flux(0) = 0.
std::vector<double> spectral_flux(const MagSpectrogram& m);

// Half-wave-rectified spectral flux (the onset detection function),
// odf(0) = 0.
std::vector<double> onset_detection_function(const MagSpectrogram& m);

// MFCCs 1..n_coeffs (coefficient 0 excluded) from log mel power energies.
FeatureMatrix mfcc(const MagSpectrogram& m, int n_mels, int n_coeffs);

// The cumulative frame-feature ladders. Columns align 1:1 with the STFT
// frames of `w` under `p`; set must be a ladder id, not msd27.
FeatureMatrix frame_features(const Waveform& w, const StftParams& p,
                             FeatureSet set);

}  // namespace featinv
