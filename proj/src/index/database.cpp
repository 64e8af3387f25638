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

#include "featinv/database.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "featinv/frame_features.hpp"
#include "featinv/parallel.hpp"
#include "featinv/segment_features.hpp"
#include "featinv/segmentation.hpp"
#include "featinv/wav.hpp"

namespace featinv {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(DbMode mode) {
  return mode == DbMode::kFrame ? "frame" : "segment";
}

DbMode parse_db_mode(const std::string& name) {
  if (name == "frame") return DbMode::kFrame;
  if (name == "segment") return DbMode::kSegment;
  throw Error("unknown database mode: " + name);
}

const Waveform& AudioCache::get(const std::string& path) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(path);
  if (it == cache_.end()) {
    it = cache_.emplace(path, read_wav(path)).first;
  }
  return it->second;
}

void AudioCache::put(const std::string& path, Waveform w) {
  std::lock_guard<std::mutex> lock(mutex_);
  cache_[path] = std::move(w);
}

const Waveform& DevDatabase::file_waveform(std::size_t file_index) const {
  if (file_index >= files.size()) throw Error("file index out of range");
  return audio_cache->get(files[file_index]);
}

std::vector<double> DevDatabase::entry_audio(std::size_t i) const {
  const DbEntry& e = entries.at(i);
  const Waveform& w = file_waveform(e.file_index);
  const long long n = static_cast<long long>(w.samples.size());
  std::vector<double> out(static_cast<std::size_t>(e.length), 0.0);
  for (long long t = 0; t < e.length; ++t) {
    const long long src = e.start + t;
    if (src >= 0 && src < n) out[t] = w.samples[src];
  }
  return out;
}

namespace {

void validate_mode_set(DbMode mode, FeatureSet set) {
  if (mode == DbMode::kFrame && set == FeatureSet::kMsd27) {
    throw Error("frame mode requires a ladder feature set (3/8/11/21)");
  }
  if (mode == DbMode::kSegment && set != FeatureSet::kMsd27) {
    throw Error("segment mode requires the msd27 feature set");
  }
}

std::vector<RawEntryRow> extract_file_rows(const Waveform& w,
                                           std::size_t file_index,
                                           DbMode mode, FeatureSet set,
                                           const StftParams& p) {
  std::vector<RawEntryRow> rows;
  if (mode == DbMode::kFrame) {
    const FeatureMatrix fm = frame_features(w, p, set);
    rows.reserve(fm.frames);
    for (std::size_t n = 0; n < fm.frames; ++n) {
      RawEntryRow row;
      row.entry = {file_index, static_cast<long long>(n) * p.hop,
                   p.frame_len};
      row.features.assign(fm.col(n), fm.col(n) + fm.dim());
      rows.push_back(std::move(row));
    }
  } else {
    const std::vector<Segment> segs = segment_onsets(w, p);
    const std::vector<SegmentFeatureVector> feats = segment_features(w, segs);
    rows.reserve(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
      RawEntryRow row;
      row.entry = {file_index, segs[i].start, segs[i].length};
      const auto flat = feats[i].flatten();
      row.features.assign(flat.begin(), flat.end());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

DevDatabase build_database_from_rows(const std::vector<std::string>& files,
                                     std::vector<RawEntryRow> rows,
                                     DbMode mode, FeatureSet set,
                                     const StftParams& p, int sample_rate,
                                     std::shared_ptr<AudioCache> cache) {
  validate_mode_set(mode, set);
  if (rows.empty()) throw Error("database has no entries");
  const std::size_t dim = feature_dim(set);

  DevDatabase db;
  db.mode = mode;
  db.feature_set = set;
  db.params = p;
  db.sample_rate = sample_rate;
  db.files = files;
  db.dim = dim;
  if (cache) db.audio_cache = std::move(cache);

  std::vector<double> raw;
  raw.reserve(rows.size() * dim);
  db.entries.reserve(rows.size());
  for (const RawEntryRow& row : rows) {
    if (row.features.size() != dim) {
      throw Error("feature row dimension mismatch");
    }
    db.entries.push_back(row.entry);
    raw.insert(raw.end(), row.features.begin(), row.features.end());
  }
  db.stats = compute_stats(raw.data(), rows.size(), dim);
  db.features.resize(raw.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    standardize(raw.data() + i * dim, db.stats, db.features.data() + i * dim);
  }
  return db;
}

DevDatabase build_database(const std::vector<std::string>& corpus,
                           DbMode mode, FeatureSet set, const StftParams& p) {
  validate_mode_set(mode, set);
  p.validate();
  if (corpus.empty()) throw Error("empty corpus");

  auto cache = std::make_shared<AudioCache>();
  std::vector<std::vector<RawEntryRow>> per_file(corpus.size());
  std::vector<int> rates(corpus.size(), 0);
  parallel_for(corpus.size(), [&](std::size_t f) {
    try {
      const Waveform& w = cache->get(corpus[f]);
      rates[f] = w.sample_rate;
      per_file[f] = extract_file_rows(w, f, mode, set, p);
    } catch (const Error& e) {
      std::fprintf(stderr, "featinv: skipping %s: %s\n", corpus[f].c_str(),
                   e.what());
    }
  });

  int rate = 0;
  for (std::size_t f = 0; f < corpus.size(); ++f) {
    if (per_file[f].empty()) continue;
    if (rate == 0) rate = rates[f];
    if (rates[f] != rate) {
      throw Error("corpus mixes sample rates (" + std::to_string(rate) +
                  " vs " + std::to_string(rates[f]) + " in " + corpus[f] +
                  ")");
    }
  }

  std::vector<RawEntryRow> rows;
  for (auto& file_rows : per_file) {
    for (auto& row : file_rows) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("no readable audio in corpus");
  return build_database_from_rows(corpus, std::move(rows), mode, set, p, rate,
                                  cache);
}

void save_database(const DevDatabase& db, const std::string& dir) {
  fs::create_directories(dir);

  ordered_json manifest;
  manifest["schema"] = 1;
  manifest["mode"] = to_string(db.mode);
  manifest["feature_set"] = to_string(db.feature_set);
  manifest["stft"] = {{"frame_len", db.params.frame_len},
                      {"hop", db.params.hop},
                      {"window", to_string(db.params.window)}};
  manifest["sample_rate"] = db.sample_rate;
  manifest["stats"] = {{"mu", db.stats.mu},
                       {"sigma", db.stats.sigma},
                       {"degenerate", db.stats.degenerate}};
  manifest["files"] = db.files;
  manifest["entry_count"] = db.size();
  manifest["dim"] = db.dim;
  {
    std::ofstream out(fs::path(dir) / "manifest.json");
    if (!out) throw Error("cannot write manifest.json in " + dir);
    out << manifest.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(dir) / "features.f64", std::ios::binary);
    if (!out) throw Error("cannot write features.f64 in " + dir);
    out.write(reinterpret_cast<const char*>(db.features.data()),
              static_cast<std::streamsize>(db.features.size() *
                                           sizeof(double)));
  }
  {
    std::ofstream out(fs::path(dir) / "entries.jsonl");
    if (!out) throw Error("cannot write entries.jsonl in " + dir);
    for (const DbEntry& e : db.entries) {
      ordered_json line = {{"source_file", db.files.at(e.file_index)},
                           {"start", e.start},
                           {"length", e.length}};
      out << line.dump() << "\n";
    }
  }
}

DevDatabase load_database(const std::string& dir) {
  std::ifstream mf(fs::path(dir) / "manifest.json");
  if (!mf) throw Error("cannot open manifest.json in " + dir);
  json manifest = json::parse(mf, nullptr, /*allow_exceptions=*/true);

  DevDatabase db;
  db.mode = parse_db_mode(manifest.at("mode").get<std::string>());
  db.feature_set =
      parse_feature_set(manifest.at("feature_set").get<std::string>());
  const json& stft_j = manifest.at("stft");
  db.params.frame_len = stft_j.at("frame_len").get<int>();
  db.params.hop = stft_j.at("hop").get<int>();
  db.params.window = parse_window_kind(stft_j.at("window").get<std::string>());
  db.sample_rate = manifest.at("sample_rate").get<int>();
  db.stats.mu = manifest.at("stats").at("mu").get<std::vector<double>>();
  db.stats.sigma = manifest.at("stats").at("sigma").get<std::vector<double>>();
  db.stats.degenerate =
      manifest.at("stats").at("degenerate").get<std::vector<bool>>();
  db.files = manifest.at("files").get<std::vector<std::string>>();
  db.dim = manifest.at("dim").get<std::size_t>();
  const std::size_t count = manifest.at("entry_count").get<std::size_t>();

  std::ifstream ff(fs::path(dir) / "features.f64", std::ios::binary);
  if (!ff) throw Error("cannot open features.f64 in " + dir);
  db.features.resize(count * db.dim);
  ff.read(reinterpret_cast<char*>(db.features.data()),
          static_cast<std::streamsize>(db.features.size() * sizeof(double)));
  if (ff.gcount() !=
      static_cast<std::streamsize>(db.features.size() * sizeof(double))) {
    throw Error("features.f64 is truncated in " + dir);
  }

  std::unordered_map<std::string, std::size_t> file_index;
  for (std::size_t f = 0; f < db.files.size(); ++f) file_index[db.files[f]] = f;

  std::ifstream ef(fs::path(dir) / "entries.jsonl");
  if (!ef) throw Error("cannot open entries.jsonl in " + dir);
  std::string line;
  db.entries.reserve(count);
  while (std::getline(ef, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    const std::string path = rec.at("source_file").get<std::string>();
    const auto it = file_index.find(path);
    if (it == file_index.end()) {
      throw Error("entries.jsonl references unknown file " + path);
    }
    DbEntry e;
    e.file_index = it->second;
    e.start = rec.at("start").get<long long>();
    e.length = rec.at("length").get<long long>();
    db.entries.push_back(e);
  }
  if (db.entries.size() != count) {
    throw Error("entries.jsonl count does not match manifest in " + dir);
  }
  return db;
}

}  // namespace featinv
