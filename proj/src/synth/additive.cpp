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

#include <algorithm>

#include "featinv/kernels.hpp"
#include "featinv/resample.hpp"
#include "featinv/stft.hpp"
#include "featinv/synth.hpp"

namespace featinv {
namespace {

CombineMode combine_mode_of(SynthMethod method) {
  switch (method) {
    case SynthMethod::kAddMedian:
      return CombineMode::kMedian;
    case SynthMethod::kAddMean:
      return CombineMode::kMean;
    case SynthMethod::kAddMax:
      return CombineMode::kMax;
    default:
      throw Error("method is not additive");
  }
}

Waveform trim_to_length(Waveform w, long long target_len) {
  w.samples.resize(static_cast<std::size_t>(target_len), 0.0);
  return w;
}

}  // namespace

MagSpectrogram add_combine(std::span<const MagSpectrogram> spectra,
                           CombineMode mode) {
  if (spectra.empty()) throw Error("add_combine requires at least one input");
  const MagSpectrogram& first = spectra[0];
  for (const MagSpectrogram& s : spectra) {
    if (s.bins != first.bins || s.frames != first.frames) {
      throw Error("add_combine inputs must share one shape");
    }
  }
  MagSpectrogram out;
  out.params = first.params;
  out.bins = first.bins;
  out.frames = first.frames;
  out.sample_rate = first.sample_rate;
  out.values.resize(first.values.size());

  std::vector<const double*> stack(spectra.size());
  for (std::size_t k = 0; k < spectra.size(); ++k) {
    stack[k] = spectra[k].values.data();
  }
  switch (mode) {
    case CombineMode::kMedian:
      kernels::combine_median(stack.data(), stack.size(), out.values.data(),
                              out.values.size());
      break;
    case CombineMode::kMean:
      kernels::combine_mean(stack.data(), stack.size(), out.values.data(),
                            out.values.size());
      break;
    case CombineMode::kMax:
      kernels::combine_max(stack.data(), stack.size(), out.values.data(),
                           out.values.size());
      break;
  }
  return out;
}

MagSpectrogram additive_estimate(const SegmentTarget& target,
                                 const DevDatabase& db,
                                 const SynthConfig& cfg) {
  if (db.mode != DbMode::kSegment) {
    throw Error("additive synthesis requires a segment-mode database");
  }
  if (target.segments.empty()) throw Error("target has no segments");
  const CombineMode mode = combine_mode_of(cfg.method);
  const CandidateGrid grid = build_candidate_grid(target, db, cfg);

  const int bins = db.params.bins();
  std::vector<std::size_t> seg_frames(target.segments.size());
  std::size_t total_frames = 0;
  for (std::size_t i = 0; i < target.segments.size(); ++i) {
    seg_frames[i] = frames_for_length(target.segments[i].length, db.params);
    total_frames += seg_frames[i];
  }

  MagSpectrogram out;
  out.params = db.params;
  out.bins = bins;
  out.frames = total_frames;
  out.sample_rate = target.sample_rate;
  out.values.resize(total_frames * static_cast<std::size_t>(bins));

  std::size_t frame_offset = 0;
  std::vector<MagSpectrogram> neighbors(grid.p);
  for (std::size_t i = 0; i < target.segments.size(); ++i) {
    for (std::size_t k = 0; k < grid.p; ++k) {
      const DbEntry& e = db.entries[grid.candidate(i, k)];
      const MagSpectrogram m = slice_magnitude(db.file_waveform(e.file_index),
                                               e.start, e.length, db.params);
      neighbors[k] = resample_columns(m, seg_frames[i]);
    }
    const MagSpectrogram combined = add_combine(neighbors, mode);
    std::copy(combined.values.begin(), combined.values.end(),
              out.values.begin() + frame_offset * bins);
    frame_offset += seg_frames[i];
  }
  return out;
}

MagSpectrogram frame_median_estimate(const FrameTarget& target,
                                     const DevDatabase& db,
                                     const SynthConfig& cfg) {
  if (db.mode != DbMode::kFrame) {
    throw Error("frame-median synthesis requires a frame-mode database");
  }
  if (target.frames == 0) throw Error("target has no frames");
  if (target.dim != db.dim) throw Error("target/database dimension mismatch");
  const std::size_t p = cfg.neighbors;
  if (p > db.size()) {
    throw Error("P=" + std::to_string(p) + " exceeds database size " +
                std::to_string(db.size()));
  }
  const WeightVector w =
      cfg.weights.w.empty() ? WeightVector::ones(db.dim) : cfg.weights;

  MagSpectrogram out;
  out.params = db.params;
  out.bins = db.params.bins();
  out.frames = target.frames;
  out.sample_rate = target.sample_rate;
  out.values.resize(target.frames * static_cast<std::size_t>(out.bins));

  const std::vector<double> window =
      make_window(db.params.window, db.params.frame_len);
  RealFft fft(db.params.frame_len);
  std::vector<double> columns(p * static_cast<std::size_t>(out.bins));
  std::vector<const double*> stack(p);
  for (std::size_t n = 0; n < target.frames; ++n) {
    const NeighborSet nn = knn(target.std_row(n), db, p, w);
    for (std::size_t k = 0; k < p; ++k) {
      const DbEntry& e = db.entries[nn.indices[k]];
      double* col = columns.data() + k * out.bins;
      frame_magnitude_column(db.file_waveform(e.file_index), e.start,
                             db.params, fft, window, col);
      stack[k] = col;
    }
    kernels::combine_median(stack.data(), p, out.col(n),
                            static_cast<std::size_t>(out.bins));
  }
  return out;
}

Waveform additive_synthesize(const SegmentTarget& target,
                             const DevDatabase& db, const SynthConfig& cfg) {
  const MagSpectrogram estimate = additive_estimate(target, db, cfg);
  const Waveform x = griffin_lim(estimate, cfg.gl_iters, cfg.gl_seed);
  return trim_to_length(x, target.total_length);
}

Waveform additive_synthesize(const FrameTarget& target, const DevDatabase& db,
                             const SynthConfig& cfg) {
  const MagSpectrogram estimate = frame_median_estimate(target, db, cfg);
  const Waveform x = griffin_lim(estimate, cfg.gl_iters, cfg.gl_seed);
  return trim_to_length(x, target.total_length);
}

}  // namespace featinv
