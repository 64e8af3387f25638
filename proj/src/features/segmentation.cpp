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

#include "featinv/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "featinv/frame_features.hpp"
#include "featinv/stft.hpp"

namespace featinv {
namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> moving_average3(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    int count = 1;
    if (i > 0) {
      acc += x[i - 1];
      ++count;
    }
    if (i + 1 < n) {
      acc += x[i + 1];
      ++count;
    }
    out[i] = acc / count;
  }
  return out;
}

}  // namespace

std::vector<Segment> segment_onsets(const Waveform& w, const StftParams& p) {
  const long long len = static_cast<long long>(w.samples.size());
  const MagSpectrogram mag = magnitude(stft(w, p));
  const std::vector<double> odf =
      moving_average3(onset_detection_function(mag));

  double mean = 0.0;
  for (double v : odf) mean += v;
  mean /= odf.size();
  double var = 0.0;
  for (double v : odf) var += (v - mean) * (v - mean);
  const double sigma = std::sqrt(var / odf.size());
  const double threshold = median(odf) + sigma;

  const long long gap_frames = std::max<long long>(
      1, static_cast<long long>(
             std::ceil(kMinOnsetGapSeconds * w.sample_rate / p.hop)));

  std::vector<long long> boundaries;
  long long last_onset = -gap_frames;
  for (std::size_t n = 1; n + 1 < odf.size(); ++n) {
    if (odf[n] <= threshold) continue;
    if (odf[n] <= odf[n - 1] || odf[n] < odf[n + 1]) continue;
    if (static_cast<long long>(n) - last_onset < gap_frames) continue;
    last_onset = static_cast<long long>(n);
    const long long boundary = static_cast<long long>(n) * p.hop;
    if (boundary > 0 && boundary < len) boundaries.push_back(boundary);
  }

  std::vector<Segment> segments;
  long long start = 0;
  for (long long b : boundaries) {
    if (b <= start) continue;
    segments.push_back({start, b - start});
    start = b;
  }
  segments.push_back({start, len - start});
  return segments;
}

}  // namespace featinv
