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
#include <string>

#include "featinv/types.hpp"

namespace featinv {

// Reads a PCM WAV file (16-bit integer or 32-bit float). Multi-channel
// audio is downmixed by averaging; integer samples are scaled to [-1, 1)
// by 1/32768. Malformed or unsupported files raise Error.
Waveform read_wav(const std::string& path);

// Writes 16-bit PCM mono. Samples outside [-1, 1) are clipped; the clip
// count is returned and logged to stderr when nonzero.
std::size_t write_wav(const Waveform& w, const std::string& path);

}  // namespace featinv
