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

#include "featinv/fft.hpp"
#include "featinv/types.hpp"

namespace featinv {

// Analysis window of `len` samples. Hann is the periodic variant, which
// keeps the constant-overlap-add property exact at hop = len/2^k.
std::vector<double> make_window(WindowKind kind, int len);

// True when shifted copies of the window at the given hop sum to a
// positive constant (within 1e-6 relative).
bool is_cola(const StftParams& p);

// Frame count used by stft(): all full frames plus one zero-padded
// trailing frame when hop does not divide (len - frame_len) evenly.
// Lengths below one frame map to a single zero-padded frame.
std::size_t frames_for_length(long long len, const StftParams& p);

// Short-time Fourier transform. Rejects signals shorter than one frame;
// the trailing partial frame is zero-padded, never dropped.
ComplexSpectrogram stft(const Waveform& w, const StftParams& p);

// Least-squares inverse STFT (windowed overlap-add normalized by the sum
// of squared windows). Requires COLA-satisfying params; output length is
// (frames - 1) * hop + frame_len.
Waveform istft(const ComplexSpectrogram& c);

// Magnitude spectrogram of a slice [start, start + len) of `w`,
// zero-padded at the edges; slices shorter than one frame are padded up
// to frame_len. Columns equal the corresponding full-signal STFT columns
// when the slice is frame-aligned.
MagSpectrogram slice_magnitude(const Waveform& w, long long start,
                               long long len, const StftParams& p);

// One STFT magnitude column for the frame starting at `start` in `w`.
void frame_magnitude_column(const Waveform& w, long long start,
                            const StftParams& p, const RealFft& fft,
                            const std::vector<double>& window, double* out);

}  // namespace featinv
