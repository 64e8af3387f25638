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

#include <array>
#include <string>
#include <vector>

#include "featinv/types.hpp"

namespace featinv {

inline constexpr int kAnalysisSchemaVersion = 1;

// One segment record of an analysis document. Times are in seconds;
// loudness_max_time is relative to the segment start.
struct AnalysisSegment {
  double start = 0.0;
  double duration = 0.0;
  std::array<double, kChromaDim> pitches{};
  std::array<double, kTimbreDim> timbre{};
  double loudness_start = 0.0;
  double loudness_max = 0.0;
  double loudness_max_time = 0.0;
};

// JSON feature document mirroring the segment-analysis payload (pitches,
// timbre, loudness triple per onset segment), so externally computed
// records can be synthesized without audio.
struct AnalysisDocument {
  int schema = kAnalysisSchemaVersion;
  std::string track_id;
  int sample_rate = 0;  // 0 = unspecified
  std::vector<AnalysisSegment> segments;
};

AnalysisDocument parse_analysis_document(const std::string& path);
void write_analysis_document(const AnalysisDocument& doc,
                             const std::string& path);

// Extracts segments + features from audio into a document.
AnalysisDocument analyze_waveform(const Waveform& w, const StftParams& p,
                                  const std::string& track_id);

// Converts document times to sample indices at `rate` and flattens each
// segment to the f1..f27 feature order (loudness_max_time becomes the
// in-segment fraction f27).
void document_to_segments(const AnalysisDocument& doc, int rate,
                          std::vector<Segment>* segments,
                          std::vector<double>* features);

}  // namespace featinv
