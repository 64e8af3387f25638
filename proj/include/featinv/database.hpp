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
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "featinv/stats.hpp"
#include "featinv/types.hpp"

namespace featinv {

enum class DbMode { kFrame, kSegment };

const char* to_string(DbMode mode);
DbMode parse_db_mode(const std::string& name);

// One development entry: a frame or an onset segment of a source file.
struct DbEntry {
  std::size_t file_index = 0;
  long long start = 0;
  long long length = 0;
};

// Shared, lazily populated audio store so several databases built over the
// same corpus read each file once.
class AudioCache {
 public:
  const Waveform& get(const std::string& path);
  // Seeds an in-memory entry, e.g. for audio that has no backing file.
  void put(const std::string& path, Waveform w);

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, Waveform> cache_;
};

// Indexed development store: standardized feature vectors plus locators
// into the source audio. Immutable after construction; concurrent
// read-only queries are safe.
struct DevDatabase {
  DbMode mode = DbMode::kFrame;
  FeatureSet feature_set = FeatureSet::kLadder8;
  StftParams params;
  int sample_rate = 0;
  StandardizationStats stats;
  std::vector<std::string> files;
  std::vector<DbEntry> entries;
  std::vector<double> features;  // row-major, size() x dim()
  std::size_t dim = 0;

  std::size_t size() const { return entries.size(); }
  const double* row(std::size_t i) const { return features.data() + i * dim; }

  // Audio of entry i's source file, loaded on first use.
  const Waveform& file_waveform(std::size_t file_index) const;
  std::vector<double> entry_audio(std::size_t i) const;

  std::shared_ptr<AudioCache> audio_cache =
      std::make_shared<AudioCache>();
};

// Raw (not yet standardized) rows for database assembly.
struct RawEntryRow {
  DbEntry entry;
  std::vector<double> features;
};

// Scans the corpus, extracts features (one entry per STFT frame in frame
// mode, one per onset segment in segment mode), computes standardization
// statistics over exactly these entries and stores the standardized
// vectors. Unreadable files are skipped with a warning on stderr; an empty
// result is an error. All files must share one sample rate.
DevDatabase build_database(const std::vector<std::string>& corpus,
                           DbMode mode, FeatureSet set, const StftParams& p);

// Assembles a database from externally prepared rows (used by the
// experiment harness to build per-trial subsets without re-extraction).
DevDatabase build_database_from_rows(const std::vector<std::string>& files,
                                     std::vector<RawEntryRow> rows,
                                     DbMode mode, FeatureSet set,
                                     const StftParams& p, int sample_rate,
                                     std::shared_ptr<AudioCache> cache);

// Directory persistence: manifest.json + features.f64 (row-major
// little-endian doubles) + entries.jsonl. The feature payload round-trips
// bit-exactly.
void save_database(const DevDatabase& db, const std::string& dir);
DevDatabase load_database(const std::string& dir);

}  // namespace featinv
