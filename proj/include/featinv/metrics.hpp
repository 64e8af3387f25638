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

#include "featinv/types.hpp"

namespace featinv {

// Perfect reconstructions floor at -300 dB instead of -inf.
inline constexpr double kDbFloor = -300.0;

// 20*log10(||S - S_hat||_F / ||S||_F). Errors on an all-zero reference.
double relative_error_db(const MagSpectrogram& s, const MagSpectrogram& s_hat);

// Same ratio scored as 10*log10(.), i.e. exactly half the dB value.
double mse_db(const MagSpectrogram& s, const MagSpectrogram& s_hat);

// Scales a nonnegative spectrogram so its entries sum to 1.
MagSpectrogram normalize_spectrogram(const MagSpectrogram& s);

// Kullback-Leibler divergence (natural log) between two normalized
// spectrograms treated as distributions, with a 1e-12 floor inside the
// ratio. Inputs must sum to 1 within 1e-9.
double kl_divergence(const MagSpectrogram& s_n, const MagSpectrogram& s_hat_n);

}  // namespace featinv
