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

#include "featinv/types.hpp"

namespace featinv {

// Stretches `s` to exactly `target_len` samples by band-limited
// (windowed-sinc) resampling, so pitch scales inversely with length.
// target_len == len(s) returns the input unchanged.
Waveform time_stretch(const Waveform& s, long long target_len);

// Linear resampling of a spectrogram along the time axis to `new_frames`
// columns. new_frames == frames is an exact copy.
MagSpectrogram resample_columns(const MagSpectrogram& m,
                                std::size_t new_frames);

// Same interpolation over a raw column-major matrix (`rows` x `cols`).
void resample_matrix_columns(const double* in, std::size_t rows,
                             std::size_t cols, double* out,
                             std::size_t new_cols);

}  // namespace featinv
