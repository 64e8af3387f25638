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

#include <cstdint>
#include <vector>

#include "featinv/types.hpp"

namespace featinv {

inline constexpr int kDefaultGriffinLimIters = 50;

// Iterative phase reconstruction: alternate least-squares ISTFT and
// magnitude replacement, starting from uniformly random phases drawn from
// `seed`. Returns the waveform after `n_iter` iterations; deterministic
// for fixed (m, n_iter, seed).
//
// When `inconsistency` is non-null it receives, per iteration, the
// relative inconsistency ||m - |stft(x_k)|||_F / ||m||_F, a non-increasing
// sequence.
Waveform griffin_lim(const MagSpectrogram& m, int n_iter, std::uint64_t seed,
                     std::vector<double>* inconsistency = nullptr);

}  // namespace featinv
