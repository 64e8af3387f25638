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

#include "featinv/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "featinv/frame_features.hpp"
#include "featinv/metrics.hpp"
#include "featinv/parallel.hpp"
#include "featinv/segment_features.hpp"
#include "featinv/segmentation.hpp"
#include "featinv/stft.hpp"

namespace featinv {
namespace {

struct FileData {
  std::size_t frames = 0;            // frame mode
  std::vector<double> frame_raw;     // frames x ladder_dim, row-major
  std::vector<Segment> segments;     // segment mode
  std::vector<double> segment_raw;   // segments x 27, row-major
};

struct Corpus {
  std::vector<std::string> paths;
  std::vector<std::string> genres;
  std::vector<FileData> data;
  std::shared_ptr<AudioCache> cache = std::make_shared<AudioCache>();
  int sample_rate = 0;
  std::size_t ladder_dim = 0;
};

int max_label(const std::vector<int>& labels) {
  int best = 0;
  for (int l : labels) best = std::max(best, l);
  return best;
}

Corpus preload(const ExperimentSpec& spec,
               const std::vector<std::string>& paths) {
  if (paths.empty()) throw Error("experiment corpus is empty");
  Corpus corpus;
  corpus.paths = paths;
  corpus.genres.resize(paths.size());
  corpus.data.resize(paths.size());

  const FeatureSet extract_set =
      spec.mode == DbMode::kFrame
          ? feature_set_for_label(max_label(spec.m_labels))
          : FeatureSet::kMsd27;
  corpus.ladder_dim =
      spec.mode == DbMode::kFrame ? feature_dim(extract_set) : 0;

  std::vector<int> rates(paths.size(), 0);
  parallel_for(paths.size(), [&](std::size_t f) {
    corpus.genres[f] = genre_of(paths[f]);
    const Waveform& w = corpus.cache->get(paths[f]);
    rates[f] = w.sample_rate;
    FileData& d = corpus.data[f];
    if (spec.mode == DbMode::kFrame) {
      const FeatureMatrix fm = frame_features(w, spec.stft, extract_set);
      d.frames = fm.frames;
      d.frame_raw = fm.values;  // column-major == per-frame rows
    } else {
      d.segments = segment_onsets(w, spec.stft);
      const std::vector<SegmentFeatureVector> feats =
          segment_features(w, d.segments);
      d.segment_raw.reserve(feats.size() * kSegmentFeatureDim);
      for (const auto& v : feats) {
        const auto flat = v.flatten();
        d.segment_raw.insert(d.segment_raw.end(), flat.begin(), flat.end());
      }
    }
  });
  corpus.sample_rate = rates[0];
  for (std::size_t f = 0; f < paths.size(); ++f) {
    if (rates[f] != corpus.sample_rate) {
      throw Error("experiment corpus mixes sample rates");
    }
  }
  return corpus;
}

// Portable deterministic draws (uniform_int_distribution is
// implementation-defined).
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

void fisher_yates(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[draw_index(rng, i)]);
  }
}

std::string cell_name(int m, std::size_t n, std::size_t p) {
  return "cell (M=" + std::to_string(m) + ", N=" + std::to_string(n) +
         ", P=" + std::to_string(p) + ")";
}

WeightVector weights_for_combo(const std::string& combo, std::size_t dim) {
  if (combo == "all") return WeightVector::ones(dim);
  bool use_chroma = false, use_timbre = false, use_loudness = false;
  std::string token;
  std::stringstream ss(combo);
  while (std::getline(ss, token, ',')) {
    if (token == "chroma") {
      use_chroma = true;
    } else if (token == "timbre") {
      use_timbre = true;
    } else if (token == "loudness") {
      use_loudness = true;
    } else {
      throw Error("unknown feature group: " + token);
    }
  }
  return WeightVector::for_groups(use_chroma, use_timbre, use_loudness);
}

struct Split {
  std::size_t test_file = 0;
  std::vector<std::size_t> dev_files;
  std::vector<RawEntryRow> dev_rows;
};

Split draw_split(const Corpus& corpus, const ExperimentSpec& spec,
                 std::size_t dim, std::size_t n_entries,
                 std::mt19937_64& rng, const std::string& cell) {
  const bool frame_mode = spec.mode == DbMode::kFrame;
  std::vector<std::size_t> eligible;
  for (std::size_t f = 0; f < corpus.paths.size(); ++f) {
    const std::size_t count = frame_mode ? corpus.data[f].frames
                                         : corpus.data[f].segments.size();
    const std::size_t need =
        frame_mode ? spec.excerpt_frames : spec.excerpt_segments;
    if (count >= need) eligible.push_back(f);
  }
  if (eligible.empty()) {
    throw Error(cell + ": no file is long enough for a test excerpt");
  }

  Split split;
  split.test_file = eligible[draw_index(rng, eligible.size())];

  std::vector<std::size_t> pool;
  for (std::size_t f = 0; f < corpus.paths.size(); ++f) {
    if (f == split.test_file) continue;
    if (spec.genre_exclusion &&
        corpus.genres[f] == corpus.genres[split.test_file]) {
      continue;
    }
    pool.push_back(f);
  }
  fisher_yates(pool, rng);

  for (std::size_t f : pool) {
    if (split.dev_rows.size() >= n_entries) break;
    const FileData& d = corpus.data[f];
    const std::size_t count =
        frame_mode ? d.frames : d.segments.size();
    bool used = false;
    for (std::size_t j = 0; j < count; ++j) {
      if (split.dev_rows.size() >= n_entries) break;
      RawEntryRow row;
      if (frame_mode) {
        row.entry = {f, static_cast<long long>(j) * spec.stft.hop,
                     spec.stft.frame_len};
        const double* src = d.frame_raw.data() + j * corpus.ladder_dim;
        row.features.assign(src, src + dim);
      } else {
        row.entry = {f, d.segments[j].start, d.segments[j].length};
        const double* src = d.segment_raw.data() + j * kSegmentFeatureDim;
        row.features.assign(src, src + kSegmentFeatureDim);
      }
      split.dev_rows.push_back(std::move(row));
      used = true;
    }
    if (used) split.dev_files.push_back(f);
  }
  if (split.dev_rows.size() < n_entries) {
    throw Error(cell + ": need " + std::to_string(n_entries) +
                " dev entries but only " +
                std::to_string(split.dev_rows.size()) +
                " are available outside the test file" +
                (spec.genre_exclusion ? " and its genre" : ""));
  }
  return split;
}

struct TrialScores {
  double re = 0.0, mse = 0.0, kl = 0.0;
};

TrialScores score_pair(const MagSpectrogram& ref, const MagSpectrogram& est) {
  TrialScores s;
  s.re = relative_error_db(ref, est);
  s.mse = mse_db(ref, est);
  s.kl = kl_divergence(normalize_spectrogram(ref),
                       normalize_spectrogram(est));
  return s;
}

TrialScores run_frame_trial(const Corpus& corpus, const ExperimentSpec& spec,
                            const Split& split, int m_label, std::size_t p,
                            SynthMethod method, std::mt19937_64& rng) {
  if (method != SynthMethod::kFrameMedian) {
    throw Error("frame-mode experiments support the frame-median method only");
  }
  const FeatureSet set = feature_set_for_label(m_label);
  const std::size_t dim = feature_dim(set);
  DevDatabase db = build_database_from_rows(
      corpus.paths, split.dev_rows, DbMode::kFrame, set, spec.stft,
      corpus.sample_rate, corpus.cache);

  const FileData& test = corpus.data[split.test_file];
  const std::size_t start =
      draw_index(rng, test.frames - spec.excerpt_frames + 1);

  FrameTarget target;
  target.sample_rate = corpus.sample_rate;
  target.params = spec.stft;
  target.frames = spec.excerpt_frames;
  target.dim = dim;
  target.total_length =
      static_cast<long long>(spec.excerpt_frames - 1) * spec.stft.hop +
      spec.stft.frame_len;
  target.std_features.resize(target.frames * dim);
  for (std::size_t j = 0; j < target.frames; ++j) {
    const double* raw =
        test.frame_raw.data() + (start + j) * corpus.ladder_dim;
    standardize(raw, db.stats, target.std_features.data() + j * dim);
  }

  SynthConfig cfg;
  cfg.method = method;
  cfg.neighbors = p;

  const MagSpectrogram estimate = frame_median_estimate(target, db, cfg);

  MagSpectrogram ref;
  ref.params = spec.stft;
  ref.bins = spec.stft.bins();
  ref.frames = target.frames;
  ref.sample_rate = corpus.sample_rate;
  ref.values.resize(ref.frames * static_cast<std::size_t>(ref.bins));
  const Waveform& audio = corpus.cache->get(corpus.paths[split.test_file]);
  const std::vector<double> window =
      make_window(spec.stft.window, spec.stft.frame_len);
  RealFft fft(spec.stft.frame_len);
  for (std::size_t j = 0; j < target.frames; ++j) {
    frame_magnitude_column(audio,
                           static_cast<long long>(start + j) * spec.stft.hop,
                           spec.stft, fft, window, ref.col(j));
  }
  return score_pair(ref, estimate);
}

TrialScores run_segment_trial(const Corpus& corpus, const ExperimentSpec& spec,
                              const Split& split, std::size_t p,
                              SynthMethod method, const WeightVector& weights,
                              std::uint64_t gl_seed, std::mt19937_64& rng) {
  if (method == SynthMethod::kFrameMedian) {
    throw Error("segment-mode experiments require a segment method");
  }
  DevDatabase db = build_database_from_rows(
      corpus.paths, split.dev_rows, DbMode::kSegment, FeatureSet::kMsd27,
      spec.stft, corpus.sample_rate, corpus.cache);

  const FileData& test = corpus.data[split.test_file];
  const std::size_t s0 =
      draw_index(rng, test.segments.size() - spec.excerpt_segments + 1);
  const long long t0 = test.segments[s0].start;
  const Segment& last = test.segments[s0 + spec.excerpt_segments - 1];
  const long long t1 = last.start + last.length;

  SegmentTarget target;
  target.sample_rate = corpus.sample_rate;
  target.total_length = t1 - t0;
  const Waveform& audio = corpus.cache->get(corpus.paths[split.test_file]);
  target.audio.sample_rate = corpus.sample_rate;
  target.audio.samples.assign(audio.samples.begin() + t0,
                              audio.samples.begin() + t1);
  for (std::size_t j = 0; j < spec.excerpt_segments; ++j) {
    Segment s = test.segments[s0 + j];
    s.start -= t0;
    target.segments.push_back(s);
    const double* raw =
        test.segment_raw.data() + (s0 + j) * kSegmentFeatureDim;
    target.raw_features.insert(target.raw_features.end(), raw,
                               raw + kSegmentFeatureDim);
  }
  target.std_features.resize(target.raw_features.size());
  for (std::size_t j = 0; j < spec.excerpt_segments; ++j) {
    standardize(target.raw_row(j), db.stats,
                target.std_features.data() + j * kSegmentFeatureDim);
  }

  SynthConfig cfg;
  cfg.method = method;
  cfg.neighbors = p;
  cfg.weights = weights;
  cfg.gl_iters = spec.gl_iters;
  cfg.gl_seed = gl_seed;

  if (is_additive(method)) {
    // The reconstruction metric compares magnitude estimates, so the
    // additive methods are scored before phase reconstruction.
    const MagSpectrogram estimate = additive_estimate(target, db, cfg);
    MagSpectrogram ref;
    ref.params = spec.stft;
    ref.bins = spec.stft.bins();
    ref.sample_rate = corpus.sample_rate;
    std::vector<double> cols;
    std::size_t total_frames = 0;
    for (std::size_t j = 0; j < target.segments.size(); ++j) {
      const MagSpectrogram m =
          slice_magnitude(target.audio, target.segments[j].start,
                          target.segments[j].length, spec.stft);
      cols.insert(cols.end(), m.values.begin(), m.values.end());
      total_frames += m.frames;
    }
    ref.frames = total_frames;
    ref.values = std::move(cols);
    return score_pair(ref, estimate);
  }

  Waveform synthesized;
  switch (method) {
    case SynthMethod::kCrossPlain:
      synthesized = cross_plain(target, db, cfg);
      break;
    case SynthMethod::kCrossNormalized:
      synthesized = cross_normalized(target, db, cfg);
      break;
    case SynthMethod::kCrossPenalized:
      synthesized = cross_penalized(target, db, cfg);
      break;
    default:
      throw Error("unhandled method");
  }
  const MagSpectrogram ref = magnitude(stft(target.audio, spec.stft));
  const MagSpectrogram est = magnitude(stft(synthesized, spec.stft));
  return score_pair(ref, est);
}

}  // namespace

std::string genre_of(const std::string& path) {
  const std::string base = std::filesystem::path(path).filename().string();
  const std::size_t dot = base.find('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

FeatureSet feature_set_for_label(int m_label) {
  switch (m_label) {
    case 3:
      return FeatureSet::kLadder3;
    case 8:
      return FeatureSet::kLadder8;
    case 11:
      return FeatureSet::kLadder11;
    case 21:
      return FeatureSet::kLadder21;
    default:
      throw Error("M must be one of 3, 8, 11, 21 (got " +
                  std::to_string(m_label) + ")");
  }
}

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<std::string>& corpus_paths,
                                SynthMethod method) {
  if (spec.trials < 1) throw Error("trials must be >= 1");
  if (spec.m_labels.empty() || spec.n_values.empty() ||
      spec.p_values.empty() || spec.combos.empty()) {
    throw Error("experiment grids must be nonempty");
  }
  const Corpus corpus = preload(spec, corpus_paths);
  const std::vector<int> labels =
      spec.mode == DbMode::kFrame ? spec.m_labels : std::vector<int>{27};

  ExperimentReport report;
  for (int m_label : labels) {
    const std::size_t dim = spec.mode == DbMode::kFrame
                                ? feature_dim(feature_set_for_label(m_label))
                                : kSegmentFeatureDim;
    for (std::size_t n : spec.n_values) {
      for (std::size_t p : spec.p_values) {
        for (std::size_t ci = 0; ci < spec.combos.size(); ++ci) {
          const WeightVector weights =
              spec.mode == DbMode::kFrame
                  ? WeightVector::ones(dim)
                  : weights_for_combo(spec.combos[ci], dim);
          for (int trial = 0; trial < spec.trials; ++trial) {
            std::uint64_t seed = spec.split_seed;
            seed = mix_seed(seed, static_cast<std::uint64_t>(m_label));
            seed = mix_seed(seed, n);
            seed = mix_seed(seed, p);
            seed = mix_seed(seed, ci);
            seed = mix_seed(seed, static_cast<std::uint64_t>(method));
            seed = mix_seed(seed, static_cast<std::uint64_t>(trial));
            std::mt19937_64 rng(seed);

            const std::string cell = cell_name(m_label, n, p);
            Split split = draw_split(corpus, spec, dim, n, rng, cell);

            TrialResult row;
            row.m_label = m_label;
            row.n = n;
            row.p = p;
            row.method = to_string(method);
            row.combo = spec.combos[ci];
            row.seed = seed;
            row.test_file = split.test_file;
            row.dev_files = split.dev_files;

            const TrialScores scores =
                spec.mode == DbMode::kFrame
                    ? run_frame_trial(corpus, spec, split, m_label, p, method,
                                      rng)
                    : run_segment_trial(corpus, spec, split, p, method,
                                        weights, seed, rng);
            row.relative_error_db = scores.re;
            row.mse_db = scores.mse;
            row.kl = scores.kl;
            report.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return report;
}

void write_report_csv(const ExperimentReport& report,
                      const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (out == nullptr) throw Error("cannot write CSV report: " + path);
  std::fputs("M,N,P,method,feature_combo,seed,relative_error_db,mse_db,kl\n",
             out);
  for (const TrialResult& r : report.rows) {
    std::fprintf(out, "%d,%zu,%zu,%s,%s,%llu,%.17g,%.17g,%.17g\n", r.m_label,
                 r.n, r.p, r.method.c_str(), r.combo.c_str(),
                 static_cast<unsigned long long>(r.seed),
                 r.relative_error_db, r.mse_db, r.kl);
  }
  std::fclose(out);
}

void write_report_summary_json(const ExperimentReport& report,
                               const std::string& path) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json cells = ordered_json::array();
  std::vector<std::string> seen;
  for (const TrialResult& r : report.rows) {
    const std::string key = std::to_string(r.m_label) + "|" +
                            std::to_string(r.n) + "|" + std::to_string(r.p) +
                            "|" + r.method + "|" + r.combo;
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    int count = 0;
    double re = 0.0, mse = 0.0, kl = 0.0;
    for (const TrialResult& s : report.rows) {
      if (s.m_label != r.m_label || s.n != r.n || s.p != r.p ||
          s.method != r.method || s.combo != r.combo) {
        continue;
      }
      ++count;
      re += s.relative_error_db;
      mse += s.mse_db;
      kl += s.kl;
    }
    ordered_json cell;
    cell["M"] = r.m_label;
    cell["N"] = r.n;
    cell["P"] = r.p;
    cell["method"] = r.method;
    cell["feature_combo"] = r.combo;
    cell["trials"] = count;
    cell["mean_relative_error_db"] = re / count;
    cell["mean_mse_db"] = mse / count;
    cell["mean_kl"] = kl / count;
    cells.push_back(cell);
  }
  ordered_json root;
  root["cells"] = cells;
  std::ofstream out(path);
  if (!out) throw Error("cannot write JSON summary: " + path);
  out << root.dump(2) << "\n";
}

}  // namespace featinv
