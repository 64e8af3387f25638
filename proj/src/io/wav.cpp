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

#include "featinv/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace featinv {

static_assert(std::endian::native == std::endian::little,
              "WAV and database I/O assume a little-endian host");

namespace {

inline constexpr std::uint16_t kFormatPcm = 1;
inline constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (p[1] << 8) | (p[2] << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open WAV file: " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw Error("malformed WAV header in " + path);
  }

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const unsigned char* chunk = data.data() + pos;
    const std::uint32_t chunk_size = read_u32(chunk + 4);
    const unsigned char* body = chunk + 8;
    if (pos + 8 + chunk_size > data.size()) {
      throw Error("truncated WAV chunk in " + path);
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw Error("malformed fmt chunk in " + path);
      format = read_u16(body);
      channels = read_u16(body + 2);
      sample_rate = read_u32(body + 4);
      bits = read_u16(body + 14);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = body;
      payload_size = chunk_size;
    }
    pos += 8 + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }
  if (payload == nullptr || sample_rate == 0 || channels == 0) {
    throw Error("WAV file missing fmt or data chunk: " + path);
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatIeeeFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw Error("unsupported WAV codec in " + path + " (format " +
                std::to_string(format) + ", " + std::to_string(bits) +
                " bits); expected 16-bit PCM or 32-bit float");
  }

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = payload_size / frame_bytes;

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  w.samples.resize(n_frames);
  const double inv_channels = 1.0 / channels;
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      const unsigned char* sp = payload + i * frame_bytes +
                                ch * bytes_per_sample;
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, sp, 2);
        acc += v / 32768.0;
      } else {
        float v;
        std::memcpy(&v, sp, 4);
        acc += v;
      }
    }
    w.samples[i] = acc * inv_channels;
  }
  w.validate();
  return w;
}

std::size_t write_wav(const Waveform& w, const std::string& path) {
  w.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot create WAV file: " + path);

  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(w.samples.size() * 2);
  const std::uint32_t riff_size = 36 + data_bytes;
  const std::uint32_t rate = static_cast<std::uint32_t>(w.sample_rate);
  const std::uint32_t byte_rate = rate * 2;

  unsigned char header[44];
  std::memcpy(header, "RIFF", 4);
  std::memcpy(header + 4, &riff_size, 4);
  std::memcpy(header + 8, "WAVEfmt ", 8);
  const std::uint32_t fmt_size = 16;
  std::memcpy(header + 16, &fmt_size, 4);
  const std::uint16_t format = kFormatPcm, channels = 1, block = 2, bits = 16;
  std::memcpy(header + 20, &format, 2);
  std::memcpy(header + 22, &channels, 2);
  std::memcpy(header + 24, &rate, 4);
  std::memcpy(header + 28, &byte_rate, 4);
  std::memcpy(header + 32, &block, 2);
  std::memcpy(header + 34, &bits, 2);
  std::memcpy(header + 36, "data", 4);
  std::memcpy(header + 40, &data_bytes, 4);
  out.write(reinterpret_cast<const char*>(header), sizeof(header));

  std::size_t clipped = 0;
  std::vector<std::int16_t> codes(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    if (w.samples[i] >= 1.0 || w.samples[i] < -1.0) ++clipped;
    long v = std::lround(w.samples[i] * 32768.0);
    v = std::clamp(v, -32768L, 32767L);
    codes[i] = static_cast<std::int16_t>(v);
  }
  out.write(reinterpret_cast<const char*>(codes.data()),
            static_cast<std::streamsize>(codes.size() * 2));
  if (!out) throw Error("failed to write WAV payload: " + path);
  if (clipped > 0) {
    std::fprintf(stderr, "featinv: clipped %zu samples writing %s\n", clipped,
                 path.c_str());
  }
  return clipped;
}

}  // namespace featinv
