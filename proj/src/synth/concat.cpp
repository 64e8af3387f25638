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
#include <cmath>

#include "featinv/kernels.hpp"
#include "featinv/resample.hpp"
#include "featinv/segment_features.hpp"
#include "featinv/synth.hpp"

namespace featinv {
namespace {

void check_segment_db(const SegmentTarget& target, const DevDatabase& db) {
  if (db.mode != DbMode::kSegment) {
    throw Error("concatenative synthesis requires a segment-mode database");
  }
  if (db.size() == 0) throw Error("empty database");
  if (target.segments.empty()) throw Error("target has no segments");
}

WeightVector effective_weights(const DevDatabase& db, const SynthConfig& cfg) {
  return cfg.weights.w.empty() ? WeightVector::ones(db.dim) : cfg.weights;
}

// Target peak amplitude for Cross-Normalized: exact when target audio is
// available, otherwise estimated from the raw loudness-peak feature f26
// (10*log10 of frame energy over the analysis frame).
double target_peak(const SegmentTarget& target, std::size_t i) {
  const Segment& s = target.segments[i];
  if (!target.audio.samples.empty()) {
    return kernels::max_abs(target.audio.samples.data() + s.start,
                            static_cast<std::size_t>(s.length));
  }
  const double loudness_peak = target.raw_row(i)[25];
  const double energy = std::pow(10.0, loudness_peak / 10.0);
  return std::min(1.0, std::sqrt(2.0 * energy / kSegmentFrameLen));
}

void apply_boundary_fades(Waveform& out, const std::vector<Segment>& segments,
                          double fade_ms) {
  if (fade_ms <= 0.0) return;
  const long long fade =
      static_cast<long long>(fade_ms * 1e-3 * out.sample_rate);
  if (fade < 1) return;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    const long long ramp = std::min(fade, s.length / 2);
    if (ramp < 1) continue;
    // Fade in at every boundary except the signal start, fade out except
    // at the signal end.
    if (i > 0) {
      for (long long t = 0; t < ramp; ++t) {
        out.samples[s.start + t] *= static_cast<double>(t + 1) / ramp;
      }
    }
    if (i + 1 < segments.size()) {
      for (long long t = 0; t < ramp; ++t) {
        out.samples[s.start + s.length - 1 - t] *=
            static_cast<double>(t + 1) / ramp;
      }
    }
  }
}

Waveform render_plain(const SegmentTarget& target, const DevDatabase& db,
                      const std::vector<std::size_t>& picks,
                      const SynthConfig& cfg) {
  Waveform out;
  out.sample_rate = target.sample_rate;
  out.samples.assign(static_cast<std::size_t>(target.total_length), 0.0);
  for (std::size_t i = 0; i < target.segments.size(); ++i) {
    const Segment& slot = target.segments[i];
    const std::vector<double> src = db.entry_audio(picks[i]);
    const long long n = std::min<long long>(slot.length,
                                            static_cast<long long>(src.size()));
    std::copy(src.begin(), src.begin() + n, out.samples.begin() + slot.start);
  }
  apply_boundary_fades(out, target.segments, cfg.boundary_fade_ms);
  return out;
}

Waveform render_normalized(const SegmentTarget& target, const DevDatabase& db,
                           const std::vector<std::size_t>& picks,
                           const SynthConfig& cfg) {
  Waveform out;
  out.sample_rate = target.sample_rate;
  out.samples.assign(static_cast<std::size_t>(target.total_length), 0.0);
  for (std::size_t i = 0; i < target.segments.size(); ++i) {
    const Segment& slot = target.segments[i];
    Waveform src;
    src.sample_rate = db.sample_rate;
    src.samples = db.entry_audio(picks[i]);
    const Waveform stretched = time_stretch(src, slot.length);

    const double want_peak = target_peak(target, i);
    const double have_peak =
        kernels::max_abs(stretched.samples.data(), stretched.samples.size());
    const double gain =
        (want_peak > 0.0 && have_peak > 0.0) ? want_peak / have_peak : 0.0;
    kernels::scale(stretched.samples.data(), gain,
                   out.samples.data() + slot.start, stretched.samples.size());
  }
  apply_boundary_fades(out, target.segments, cfg.boundary_fade_ms);
  return out;
}

}  // namespace

Waveform cross_plain(const SegmentTarget& target, const DevDatabase& db,
                     const SynthConfig& cfg) {
  check_segment_db(target, db);
  const WeightVector w = effective_weights(db, cfg);
  std::vector<std::size_t> picks(target.segments.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    picks[i] = knn(target.std_row(i), db, 1, w).indices[0];
  }
  return render_plain(target, db, picks, cfg);
}

Waveform cross_normalized(const SegmentTarget& target, const DevDatabase& db,
                          const SynthConfig& cfg) {
  check_segment_db(target, db);
  const WeightVector w = effective_weights(db, cfg);
  std::vector<std::size_t> picks(target.segments.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    picks[i] = knn(target.std_row(i), db, 1, w).indices[0];
  }
  return render_normalized(target, db, picks, cfg);
}

Waveform cross_penalized(const SegmentTarget& target, const DevDatabase& db,
                         const SynthConfig& cfg) {
  check_segment_db(target, db);
  const CandidateGrid grid = build_candidate_grid(target, db, cfg);
  const std::vector<std::size_t> picks =
      viterbi_path(grid, db, cfg.lambda_v);
  return render_normalized(target, db, picks, cfg);
}

}  // namespace featinv
