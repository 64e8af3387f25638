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

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "featinv/segment_features.hpp"
#include "featinv/segmentation.hpp"

namespace featinv {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& json_path,
                               const std::string& what) {
  throw Error("analysis document: " + json_path + ": " + what);
}

double require_number(const json& j, const std::string& json_path) {
  if (!j.is_number()) schema_error(json_path, "expected a number");
  return j.get<double>();
}

template <std::size_t N>
std::array<double, N> require_array(const json& j,
                                    const std::string& json_path) {
  if (!j.is_array() || j.size() != N) {
    schema_error(json_path,
                 "expected an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = require_number(j[i], json_path + "/" + std::to_string(i));
  }
  return out;
}

const json& field(const json& parent, const char* key,
                  const std::string& base) {
  const auto it = parent.find(key);
  if (it == parent.end()) schema_error(base + "/" + key, "missing field");
  return *it;
}

}  // namespace

AnalysisDocument parse_analysis_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open analysis document: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("analysis document " + path + " is not valid JSON: " +
                e.what());
  }

  AnalysisDocument doc;
  if (!root.contains("schema") || !root["schema"].is_number_integer()) {
    schema_error("/schema", "missing integer schema version");
  }
  doc.schema = root["schema"].get<int>();
  if (doc.schema != kAnalysisSchemaVersion) {
    schema_error("/schema", "unsupported version " +
                                std::to_string(doc.schema));
  }
  doc.track_id = root.value("track_id", std::string{});
  if (root.contains("sample_rate")) {
    doc.sample_rate = root["sample_rate"].get<int>();
  }
  if (!root.contains("segments") || !root["segments"].is_array() ||
      root["segments"].empty()) {
    schema_error("/segments", "expected a nonempty array");
  }

  double prev_end = 0.0;
  for (std::size_t i = 0; i < root["segments"].size(); ++i) {
    const json& sj = root["segments"][i];
    const std::string base = "/segments/" + std::to_string(i);
    AnalysisSegment s;
    s.start = require_number(field(sj, "start", base), base + "/start");
    s.duration =
        require_number(field(sj, "duration", base), base + "/duration");
    if (s.start < 0.0) schema_error(base + "/start", "must be nonnegative");
    if (s.duration <= 0.0) schema_error(base + "/duration", "must be positive");
    // Ordered and non-overlapping (tolerating rounding at the join).
    if (s.start < prev_end - 1e-9) {
      schema_error(base + "/start", "segments must be ordered and disjoint");
    }
    prev_end = s.start + s.duration;
    s.pitches =
        require_array<kChromaDim>(field(sj, "pitches", base), base + "/pitches");
    s.timbre =
        require_array<kTimbreDim>(field(sj, "timbre", base), base + "/timbre");
    s.loudness_start = require_number(field(sj, "loudness_start", base),
                                      base + "/loudness_start");
    s.loudness_max = require_number(field(sj, "loudness_max", base),
                                    base + "/loudness_max");
    s.loudness_max_time = require_number(field(sj, "loudness_max_time", base),
                                         base + "/loudness_max_time");
    if (s.loudness_max_time < 0.0) {
      schema_error(base + "/loudness_max_time", "must be nonnegative");
    }
    doc.segments.push_back(s);
  }
  return doc;
}

void write_analysis_document(const AnalysisDocument& doc,
                             const std::string& path) {
  ordered_json root;
  root["schema"] = doc.schema;
  root["track_id"] = doc.track_id;
  if (doc.sample_rate > 0) root["sample_rate"] = doc.sample_rate;
  ordered_json segments = ordered_json::array();
  for (const AnalysisSegment& s : doc.segments) {
    ordered_json sj;
    sj["start"] = s.start;
    sj["duration"] = s.duration;
    sj["pitches"] = s.pitches;
    sj["timbre"] = s.timbre;
    sj["loudness_start"] = s.loudness_start;
    sj["loudness_max"] = s.loudness_max;
    sj["loudness_max_time"] = s.loudness_max_time;
    segments.push_back(sj);
  }
  root["segments"] = segments;
  std::ofstream out(path);
  if (!out) throw Error("cannot write analysis document: " + path);
  out << root.dump(2) << "\n";
}

AnalysisDocument analyze_waveform(const Waveform& w, const StftParams& p,
                                  const std::string& track_id) {
  AnalysisDocument doc;
  doc.track_id = track_id;
  doc.sample_rate = w.sample_rate;
  const std::vector<Segment> segs = segment_onsets(w, p);
  const std::vector<SegmentFeatureVector> feats = segment_features(w, segs);
  const double rate = static_cast<double>(w.sample_rate);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    AnalysisSegment s;
    s.start = segs[i].start / rate;
    s.duration = segs[i].length / rate;
    s.pitches = feats[i].chroma;
    s.timbre = feats[i].timbre;
    s.loudness_start = feats[i].loudness_start;
    s.loudness_max = feats[i].loudness_peak;
    s.loudness_max_time = feats[i].peak_position * s.duration;
    doc.segments.push_back(s);
  }
  return doc;
}

void document_to_segments(const AnalysisDocument& doc, int rate,
                          std::vector<Segment>* segments,
                          std::vector<double>* features) {
  if (rate <= 0) throw Error("analysis conversion needs a positive rate");
  segments->clear();
  features->clear();
  long long prev_end = 0;
  for (const AnalysisSegment& s : doc.segments) {
    Segment seg;
    seg.start = std::llround(s.start * rate);
    seg.length = std::max<long long>(1, std::llround(s.duration * rate));
    // Sample rounding may land on the previous segment's end; keep the
    // tiling exact.
    if (seg.start < prev_end) seg.start = prev_end;
    prev_end = seg.start + seg.length;
    segments->push_back(seg);

    SegmentFeatureVector v;
    v.chroma = s.pitches;
    v.timbre = s.timbre;
    v.loudness_start = s.loudness_start;
    v.loudness_peak = s.loudness_max;
    v.peak_position =
        std::clamp(s.loudness_max_time / s.duration, 0.0, 1.0);
    const auto flat = v.flatten();
    features->insert(features->end(), flat.begin(), flat.end());
  }
}

}  // namespace featinv
