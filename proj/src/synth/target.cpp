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

#include "featinv/analysis_json.hpp"
#include "featinv/frame_features.hpp"
#include "featinv/segment_features.hpp"
#include "featinv/segmentation.hpp"
#include "featinv/synth.hpp"

namespace featinv {

const char* to_string(SynthMethod method) {
  switch (method) {
    case SynthMethod::kCrossPlain:
      return "cross-plain";
    case SynthMethod::kCrossNormalized:
      return "cross-normalized";
    case SynthMethod::kCrossPenalized:
      return "cross-penalized";
    case SynthMethod::kAddMedian:
      return "add-median";
    case SynthMethod::kAddMean:
      return "add-mean";
    case SynthMethod::kAddMax:
      return "add-max";
    case SynthMethod::kFrameMedian:
      return "frame-median";
  }
  return "unknown";
}

SynthMethod parse_synth_method(const std::string& name) {
  if (name == "cross-plain") return SynthMethod::kCrossPlain;
  if (name == "cross-normalized") return SynthMethod::kCrossNormalized;
  if (name == "cross-penalized") return SynthMethod::kCrossPenalized;
  if (name == "add-median") return SynthMethod::kAddMedian;
  if (name == "add-mean") return SynthMethod::kAddMean;
  if (name == "add-max") return SynthMethod::kAddMax;
  if (name == "frame-median") return SynthMethod::kFrameMedian;
  throw Error("unknown synthesis method: " + name);
}

bool is_additive(SynthMethod method) {
  return method == SynthMethod::kAddMedian ||
         method == SynthMethod::kAddMean || method == SynthMethod::kAddMax;
}

SegmentTarget make_segment_target(const Waveform& w, const DevDatabase& db) {
  if (db.mode != DbMode::kSegment) {
    throw Error("segment targets require a segment-mode database");
  }
  if (w.sample_rate != db.sample_rate) {
    throw Error("target sample rate " + std::to_string(w.sample_rate) +
                " does not match database rate " +
                std::to_string(db.sample_rate));
  }
  SegmentTarget t;
  t.sample_rate = w.sample_rate;
  t.total_length = static_cast<long long>(w.samples.size());
  t.audio = w;
  t.segments = segment_onsets(w, db.params);
  const std::vector<SegmentFeatureVector> feats =
      segment_features(w, t.segments);
  t.raw_features.reserve(feats.size() * kSegmentFeatureDim);
  t.std_features.resize(feats.size() * kSegmentFeatureDim);
  for (std::size_t i = 0; i < feats.size(); ++i) {
    const auto flat = feats[i].flatten();
    t.raw_features.insert(t.raw_features.end(), flat.begin(), flat.end());
    standardize(flat.data(), db.stats,
                t.std_features.data() + i * kSegmentFeatureDim);
  }
  return t;
}

SegmentTarget make_segment_target(const AnalysisDocument& doc,
                                  const DevDatabase& db) {
  if (db.mode != DbMode::kSegment) {
    throw Error("segment targets require a segment-mode database");
  }
  SegmentTarget t;
  t.sample_rate = db.sample_rate;
  document_to_segments(doc, db.sample_rate, &t.segments, &t.raw_features);
  const Segment& last = t.segments.back();
  t.total_length = last.start + last.length;
  const std::size_t count = t.segments.size();
  t.std_features.resize(count * kSegmentFeatureDim);
  for (std::size_t i = 0; i < count; ++i) {
    standardize(t.raw_row(i), db.stats,
                t.std_features.data() + i * kSegmentFeatureDim);
  }
  return t;
}

FrameTarget make_frame_target(const Waveform& w, const DevDatabase& db) {
  if (db.mode != DbMode::kFrame) {
    throw Error("frame targets require a frame-mode database");
  }
  if (w.sample_rate != db.sample_rate) {
    throw Error("target sample rate " + std::to_string(w.sample_rate) +
                " does not match database rate " +
                std::to_string(db.sample_rate));
  }
  const FeatureMatrix fm = frame_features(w, db.params, db.feature_set);
  FrameTarget t;
  t.sample_rate = w.sample_rate;
  t.total_length = static_cast<long long>(w.samples.size());
  t.params = db.params;
  t.frames = fm.frames;
  t.dim = fm.dim();
  t.std_features.resize(t.frames * t.dim);
  for (std::size_t n = 0; n < t.frames; ++n) {
    standardize(fm.col(n), db.stats, t.std_features.data() + n * t.dim);
  }
  return t;
}

}  // namespace featinv
