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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "featinv/database.hpp"
#include "featinv/experiment.hpp"
#include "featinv/griffin_lim.hpp"
#include "featinv/kernels.hpp"
#include "featinv/knn.hpp"
#include "featinv/metrics.hpp"
#include "featinv/stft.hpp"
#include "featinv/synth.hpp"
#include "featinv/wav.hpp"
#include "corpus.hpp"

namespace fs = std::filesystem;
using namespace featinv;
using Clock = std::chrono::steady_clock;

namespace {

struct Context {
  std::string workdir;
  // Mixed-genre corpus for the segment-mode experiments; speech-like
  // corpus for the frame-mode (M, N, P) sweeps. Both exceed 30 minutes.
  std::vector<std::string> corpus;
  std::vector<std::string> speech_corpus;
  StftParams stft;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail += " [" + what + "]";
    }
  }
};

// ---------------------------------------------------------------------
// Criterion 1: knn equals an exhaustive full-sort oracle.

NeighborSet knn_full_sort_oracle(const std::vector<double>& query,
                                 const DevDatabase& db, std::size_t p,
                                 const WeightVector& w) {
  std::vector<std::pair<double, std::size_t>> all(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    std::vector<double> row(db.row(i), db.row(i) + db.dim);
    all[i] = {weighted_distance(query, row, w), i};
  }
  std::sort(all.begin(), all.end());
  NeighborSet out;
  for (std::size_t i = 0; i < p; ++i) {
    out.indices.push_back(all[i].second);
    out.distances.push_back(all[i].first);
  }
  return out;
}

Outcome criterion_knn_oracle() {
  Outcome out;
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t dim = rep % 2 == 0 ? 8 : 27;
    DevDatabase db;
    db.mode = DbMode::kFrame;
    db.dim = dim;
    db.sample_rate = 16000;
    db.files = {"acc"};
    db.features.resize(1000 * dim);
    for (double& v : db.features) v = dist(rng);
    db.entries.resize(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
      db.entries[i] = {0, static_cast<long long>(i), 1};
    }
    db.stats.mu.assign(dim, 0.0);
    db.stats.sigma.assign(dim, 1.0);
    db.stats.degenerate.assign(dim, false);

    const WeightVector w = WeightVector::ones(dim);
    for (std::size_t p : {std::size_t{1}, std::size_t{10}, std::size_t{137}}) {
      std::vector<double> q(dim);
      for (double& v : q) v = dist(rng);
      const auto got = knn(q, db, p, w);
      const auto expect = knn_full_sort_oracle(q, db, p, w);
      out.expect(got.indices == expect.indices, "index mismatch");
      out.expect(got.distances == expect.distances, "distance mismatch");
    }
  }
  const double elapsed = seconds_since(start);
  out.expect(elapsed < 10.0, "runtime exceeded 10 s");
  char buf[64];
  std::snprintf(buf, sizeof(buf), " (50 databases, %.2f s)", elapsed);
  out.detail += buf;
  return out;
}

// ---------------------------------------------------------------------
// Criterion 2: Viterbi equals brute-force enumeration.

double acc_path_cost(const CandidateGrid& grid, const DevDatabase& db,
                     const std::vector<std::size_t>& positions,
                     double lambda_v) {
  double cost = 0.0;
  for (std::size_t i = 0; i < grid.rows; ++i) {
    cost += grid.score(i, positions[i]);
    if (i > 0) {
      const auto& prev = db.entries[grid.candidate(i - 1, positions[i - 1])];
      const auto& cur = db.entries[grid.candidate(i, positions[i])];
      cost += prev.file_index == cur.file_index ? 0.0 : lambda_v;
    }
  }
  return cost;
}

Outcome criterion_viterbi_oracle() {
  Outcome out;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t rows = 5, p = 4;
    DevDatabase db;
    db.mode = DbMode::kSegment;
    db.dim = 1;
    const std::size_t n_files = 1 + rng() % 4;
    for (std::size_t f = 0; f < n_files; ++f) {
      db.files.push_back("acc" + std::to_string(f));
    }
    CandidateGrid grid;
    grid.rows = rows;
    grid.p = p;
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<double> scores(p);
      for (double& s : scores) s = dist(rng);
      std::sort(scores.begin(), scores.end());
      for (std::size_t k = 0; k < p; ++k) {
        grid.candidates.push_back(db.entries.size());
        grid.scores.push_back(scores[k]);
        db.entries.push_back({rng() % n_files, 0, 1});
      }
    }
    const double lambda = rep % 5 == 0 ? 0.0 : dist(rng);

    // Brute force over all 4^5 = 1024 paths.
    std::vector<std::size_t> best;
    double best_cost = 0.0;
    std::vector<std::size_t> path(rows, 0);
    bool first = true;
    for (int code = 0; code < 1024; ++code) {
      int c = code;
      for (std::size_t i = 0; i < rows; ++i) {
        path[i] = static_cast<std::size_t>(c % 4);
        c /= 4;
      }
      const double cost = acc_path_cost(grid, db, path, lambda);
      if (first || cost < best_cost) {
        best_cost = cost;
        best = path;
        first = false;
      }
    }

    const auto entries = viterbi_path(grid, db, lambda);
    std::vector<std::size_t> positions(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      positions[i] = entries[i] - i * p;  // candidates are consecutive
    }
    out.expect(acc_path_cost(grid, db, positions, lambda) == best_cost,
               "path cost differs from enumeration");
    if (lambda == 0.0) {
      for (std::size_t i = 0; i < rows; ++i) {
        out.expect(positions[i] == 0, "lambda=0 did not pick the row argmin");
      }
    }
  }
  out.detail = " (50 grids, 1024 paths each)";
  return out;
}

// ---------------------------------------------------------------------
// Criterion 3: self-inversion.

Outcome criterion_self_inversion(const Context& ctx) {
  Outcome out;
  const std::vector<std::string> files = {ctx.corpus[0], ctx.corpus[1],
                                          ctx.corpus[2]};
  const Waveform original = read_wav(files[1]);

  {
    const auto db =
        build_database(files, DbMode::kSegment, FeatureSet::kMsd27, ctx.stft);
    const auto target = make_segment_target(original, db);
    SynthConfig cfg;
    cfg.method = SynthMethod::kCrossPlain;
    cfg.neighbors = 1;
    const auto synth = cross_plain(target, db, cfg);
    const std::string path = ctx.workdir + "/self_inversion.wav";
    write_wav(synth, path);
    const auto back = read_wav(path);
    out.expect(back.samples.size() == original.samples.size(),
               "length mismatch");
    double max_err = 0.0;
    for (std::size_t i = 0; i < original.samples.size(); ++i) {
      max_err = std::max(max_err,
                         std::fabs(back.samples[i] - original.samples[i]));
    }
    out.expect(max_err <= 1.0 / 32768.0,
               "cross-plain output deviates beyond 16-bit quantization");
  }
  {
    const auto db =
        build_database(files, DbMode::kFrame, FeatureSet::kLadder8, ctx.stft);
    const auto target = make_frame_target(original, db);
    SynthConfig cfg;
    cfg.method = SynthMethod::kFrameMedian;
    cfg.neighbors = 1;
    const auto estimate = frame_median_estimate(target, db, cfg);
    const auto reference = magnitude(stft(original, ctx.stft));
    out.expect(estimate.values == reference.values,
               "frame-median magnitude is not exact");
  }
  return out;
}

// ---------------------------------------------------------------------
// Criterion 4: Griffin-Lim monotonicity.

Outcome criterion_griffin_lim(const Context& ctx) {
  Outcome out;
  for (int i = 0; i < 10; ++i) {
    const Waveform w = read_wav(ctx.corpus[i % ctx.corpus.size()]);
    Waveform excerpt;
    excerpt.sample_rate = w.sample_rate;
    const std::size_t len = 5 * static_cast<std::size_t>(w.sample_rate);
    const std::size_t offset = (i * 7919) % (w.samples.size() - len);
    excerpt.samples.assign(w.samples.begin() + offset,
                           w.samples.begin() + offset + len);
    const auto m = magnitude(stft(excerpt, ctx.stft));
    std::vector<double> inconsistency;
    griffin_lim(m, 50, 1000 + i, &inconsistency);
    for (std::size_t k = 1; k < inconsistency.size(); ++k) {
      out.expect(inconsistency[k] <= inconsistency[k - 1] + 1e-9,
                 "inconsistency increased at iteration " + std::to_string(k));
    }
  }
  out.detail = " (10 spectrograms, 50 iterations)";
  return out;
}

// ---------------------------------------------------------------------
// Criterion 5: metric axioms.

Outcome criterion_metric_axioms() {
  Outcome out;
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  auto random_mag = [&](int bins, std::size_t frames) {
    MagSpectrogram m;
    m.bins = bins;
    m.frames = frames;
    m.values.resize(frames * static_cast<std::size_t>(bins));
    for (double& v : m.values) v = dist(rng);
    return m;
  };

  for (int rep = 0; rep < 100; ++rep) {
    const auto a = normalize_spectrogram(random_mag(33, 7));
    const auto b = normalize_spectrogram(random_mag(33, 7));
    out.expect(std::fabs(kl_divergence(a, a)) <= 1e-9, "KL(p,p) != 0");
    out.expect(kl_divergence(a, b) >= -1e-9, "KL < 0");
  }

  const auto s = random_mag(65, 12);
  MagSpectrogram zero = s;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  out.expect(relative_error_db(s, zero) == 0.0,
             "relative_error_db(S, 0) != 0 dB");

  const auto direction = random_mag(65, 12);
  double s_norm = 0.0, d_norm = 0.0;
  for (double v : s.values) s_norm += v * v;
  for (double v : direction.values) d_norm += v * v;
  MagSpectrogram perturbed = s;
  const double scale = 0.1 * std::sqrt(s_norm / d_norm);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    perturbed.values[i] = s.values[i] + scale * direction.values[i];
  }
  out.expect(std::fabs(relative_error_db(s, perturbed) + 20.0) <= 1e-9,
             "0.1-relative perturbation is not -20 dB");
  out.detail = " (100 random pairs)";
  return out;
}

// ---------------------------------------------------------------------
// Criterion 6: error decreases with N for both M=3 and M=8.

Outcome criterion_trend(const Context& ctx) {
  Outcome out;
  const auto start = Clock::now();
  ExperimentSpec spec;
  spec.mode = DbMode::kFrame;
  spec.m_labels = {3, 8};
  spec.n_values = {1000, 10000};
  spec.p_values = {10};
  spec.trials = 10;
  spec.split_seed = 2026;
  spec.excerpt_frames = 200;
  spec.stft = ctx.stft;

  const auto report = run_experiment(spec, ctx.speech_corpus,
                                     SynthMethod::kFrameMedian);
  for (int m : {3, 8}) {
    double small = 0.0, large = 0.0;
    int cs = 0, cl = 0;
    for (const TrialResult& row : report.rows) {
      if (row.m_label != m) continue;
      if (row.n == 1000) {
        small += row.relative_error_db;
        ++cs;
      } else {
        large += row.relative_error_db;
        ++cl;
      }
    }
    out.expect(cs == 10 && cl == 10, "missing trials");
    const double mean_small = small / cs;
    const double mean_large = large / cl;
    char buf[96];
    std::snprintf(buf, sizeof(buf), " M=%d: E(N=1e3)=%.2f dB E(N=1e4)=%.2f dB;",
                  m, mean_small, mean_large);
    out.detail += buf;
    out.expect(mean_large < mean_small,
               "error did not decrease with N for M=" + std::to_string(m));
  }
  const double elapsed = seconds_since(start);
  out.expect(elapsed < 900.0, "runtime exceeded 15 minutes");
  char buf[32];
  std::snprintf(buf, sizeof(buf), " %.0f s", elapsed);
  out.detail += buf;
  return out;
}

// ---------------------------------------------------------------------
// Criterion 7: P=10 is no worse than P=1 at M=8, N=1e4.

Outcome criterion_neighbor_count(const Context& ctx) {
  Outcome out;
  ExperimentSpec spec;
  spec.mode = DbMode::kFrame;
  spec.m_labels = {8};
  spec.n_values = {10000};
  spec.p_values = {1, 5, 10, 20};
  spec.trials = 20;
  spec.split_seed = 2027;
  spec.excerpt_frames = 200;
  spec.stft = ctx.stft;

  const auto report = run_experiment(spec, ctx.speech_corpus,
                                     SynthMethod::kFrameMedian);
  double mean_p1 = 0.0, mean_p10 = 0.0;
  for (std::size_t p : {std::size_t{1}, std::size_t{5}, std::size_t{10},
                        std::size_t{20}}) {
    double total = 0.0;
    int count = 0;
    for (const TrialResult& row : report.rows) {
      if (row.p != p) continue;
      total += row.relative_error_db;
      ++count;
    }
    const double mean = total / count;
    if (p == 1) mean_p1 = mean;
    if (p == 10) mean_p10 = mean;
    char buf[48];
    std::snprintf(buf, sizeof(buf), " E(P=%zu)=%.2f dB", p, mean);
    out.detail += buf;
  }
  out.expect(mean_p10 <= mean_p1, "P=10 is worse than P=1");
  return out;
}

// ---------------------------------------------------------------------
// Criterion 8: the 7 feature combinations x 3 combine modes.

Outcome criterion_feature_combinations(const Context& ctx) {
  Outcome out;
  ExperimentSpec spec;
  spec.mode = DbMode::kSegment;
  spec.n_values = {3000};
  spec.p_values = {10};
  spec.combos = {"chroma",          "timbre",        "loudness",
                 "chroma,timbre",   "chroma,loudness",
                 "timbre,loudness", "chroma,timbre,loudness"};
  spec.trials = 2;
  spec.split_seed = 2028;
  spec.excerpt_segments = 20;
  spec.genre_exclusion = true;
  spec.stft = ctx.stft;

  ExperimentReport all;
  for (SynthMethod method : {SynthMethod::kAddMedian, SynthMethod::kAddMean,
                             SynthMethod::kAddMax}) {
    const auto report = run_experiment(spec, ctx.corpus, method);
    for (const auto& row : report.rows) all.rows.push_back(row);
  }
  out.expect(all.rows.size() == 7 * 3 * 2, "unexpected trial count");
  for (const TrialResult& row : all.rows) {
    out.expect(std::isfinite(row.kl), "KL not finite in " + row.combo);
    out.expect(row.kl >= -1e-9, "KL negative in " + row.combo);
  }
  write_report_csv(all, ctx.workdir + "/feature_combinations.csv");
  write_report_summary_json(all, ctx.workdir + "/feature_combinations.json");

  // Reported, not asserted: the combination with the lowest mean KL.
  std::string best_combo;
  double best_kl = 0.0;
  for (const auto& combo : spec.combos) {
    double total = 0.0;
    int count = 0;
    for (const TrialResult& row : all.rows) {
      if (row.combo != combo) continue;
      total += row.kl;
      ++count;
    }
    const double mean = total / count;
    if (best_combo.empty() || mean < best_kl) {
      best_combo = combo;
      best_kl = mean;
    }
  }
  out.detail = " (42 cells; best mean KL: " + best_combo + ")";
  return out;
}

// ---------------------------------------------------------------------
// Criterion 9: reduction identities, lengths, finiteness.

Outcome criterion_reductions(const Context& ctx) {
  Outcome out;
  const std::vector<std::string> files = {ctx.corpus[3], ctx.corpus[4],
                                          ctx.corpus[5]};
  const auto db =
      build_database(files, DbMode::kSegment, FeatureSet::kMsd27, ctx.stft);
  const Waveform original = read_wav(ctx.corpus[6]);
  Waveform excerpt;
  excerpt.sample_rate = original.sample_rate;
  excerpt.samples.assign(original.samples.begin(),
                         original.samples.begin() + 10 * original.sample_rate);
  const auto target = make_segment_target(excerpt, db);

  SynthConfig cfg;
  cfg.neighbors = 4;
  cfg.lambda_v = 0.0;
  cfg.gl_iters = 10;
  cfg.method = SynthMethod::kCrossPenalized;
  const auto penalized = cross_penalized(target, db, cfg);
  cfg.method = SynthMethod::kCrossNormalized;
  const auto normalized = cross_normalized(target, db, cfg);
  out.expect(penalized.samples == normalized.samples,
             "cross_penalized(lambda=0) != cross_normalized");

  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  MagSpectrogram m;
  m.bins = 33;
  m.frames = 9;
  m.values.resize(33 * 9);
  for (double& v : m.values) v = dist(rng);
  for (CombineMode mode :
       {CombineMode::kMedian, CombineMode::kMean, CombineMode::kMax}) {
    const auto combined = add_combine(std::span(&m, 1), mode);
    out.expect(combined.values == m.values, "add_combine(P=1) not identity");
  }

  for (SynthMethod method :
       {SynthMethod::kCrossPlain, SynthMethod::kCrossNormalized,
        SynthMethod::kCrossPenalized, SynthMethod::kAddMedian,
        SynthMethod::kAddMean, SynthMethod::kAddMax}) {
    cfg.method = method;
    Waveform outw;
    switch (method) {
      case SynthMethod::kCrossPlain:
        outw = cross_plain(target, db, cfg);
        break;
      case SynthMethod::kCrossNormalized:
        outw = cross_normalized(target, db, cfg);
        break;
      case SynthMethod::kCrossPenalized:
        outw = cross_penalized(target, db, cfg);
        break;
      default:
        outw = additive_synthesize(target, db, cfg);
        break;
    }
    out.expect(outw.samples.size() == excerpt.samples.size(),
               std::string("length mismatch for ") + to_string(method));
    for (double s : outw.samples) {
      if (!std::isfinite(s)) {
        out.expect(false, std::string("NaN/Inf in ") + to_string(method));
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// Criterion 10: persistence and determinism.

Outcome criterion_persistence(const Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);

  const std::vector<std::string> files = {ctx.corpus[0], ctx.corpus[7]};
  const auto db =
      build_database(files, DbMode::kSegment, FeatureSet::kMsd27, ctx.stft);
  const std::string dir = ctx.workdir + "/acceptance_db";
  save_database(db, dir);
  const auto loaded = load_database(dir);
  out.expect(loaded.features == db.features, "feature payload changed");
  const WeightVector w = WeightVector::ones(db.dim);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> q(db.dim);
    for (double& v : q) v = dist(rng);
    const auto a = knn(q, db, 7, w);
    const auto b = knn(q, loaded, 7, w);
    out.expect(a.indices == b.indices && a.distances == b.distances,
               "query results changed after reload");
  }

  ExperimentSpec spec;
  spec.mode = DbMode::kFrame;
  spec.m_labels = {3};
  spec.n_values = {500};
  spec.p_values = {3};
  spec.trials = 2;
  spec.split_seed = 31337;
  spec.excerpt_frames = 50;
  spec.stft = ctx.stft;
  const auto ra = run_experiment(spec, ctx.corpus, SynthMethod::kFrameMedian);
  const auto rb = run_experiment(spec, ctx.corpus, SynthMethod::kFrameMedian);
  const std::string csv_a = ctx.workdir + "/det_a.csv";
  const std::string csv_b = ctx.workdir + "/det_b.csv";
  write_report_csv(ra, csv_a);
  write_report_csv(rb, csv_b);
  std::ifstream fa(csv_a, std::ios::binary), fb(csv_b, std::ios::binary);
  const std::string ca((std::istreambuf_iterator<char>(fa)),
                       std::istreambuf_iterator<char>());
  const std::string cb((std::istreambuf_iterator<char>(fb)),
                       std::istreambuf_iterator<char>());
  out.expect(!ca.empty() && ca == cb, "CSV reports differ across runs");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string workdir = "acceptance_work";
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--workdir") == 0) workdir = argv[i + 1];
  }
  fs::create_directories(workdir);

  Context ctx;
  ctx.workdir = workdir;
  ctx.stft.frame_len = 1024;
  ctx.stft.hop = 256;
  ctx.stft.window = WindowKind::kHann;

  std::printf("kernel backend: %s\n",
              kernels::backend_name(kernels::active_backend()));
  std::printf("generating desk corpora (2 x 32 files x 60 s, 16 kHz)...\n");
  const auto t0 = Clock::now();
  testsupport::CorpusSpec spec;
  spec.files = 32;
  spec.seconds_per_file = 60.0;
  spec.sample_rate = 16000;
  spec.seed = 20260810;
  ctx.corpus = testsupport::generate_corpus(workdir + "/corpus", spec);
  testsupport::CorpusSpec speech = spec;
  speech.genres = {"vocal"};
  speech.seed = 20260811;
  ctx.speech_corpus =
      testsupport::generate_corpus(workdir + "/speech_corpus", speech);
  std::printf("corpora ready (%.1f s)\n", seconds_since(t0));

  int failures = 0;
  const auto report = [&](int number, const char* name, const Outcome& o) {
    std::printf("[%s] criterion %d: %s%s%s%s\n", o.ok ? "PASS" : "FAIL",
                number, name, o.detail.empty() ? "" : " --", o.detail.c_str(),
                o.ok ? "" : " !!");
    if (!o.ok) ++failures;
    std::fflush(stdout);
  };

  report(1, "knn equals the exhaustive full-sort oracle",
         criterion_knn_oracle());
  report(2, "viterbi equals brute-force path enumeration",
         criterion_viterbi_oracle());
  report(3, "self-inversion (cross-plain exact, frame-median exact)",
         criterion_self_inversion(ctx));
  report(4, "griffin-lim inconsistency is non-increasing",
         criterion_griffin_lim(ctx));
  report(5, "metric axioms (KL, relative error)", criterion_metric_axioms());
  report(6, "error decreases from N=1e3 to N=1e4 for M=3 and M=8",
         criterion_trend(ctx));
  report(7, "P=10 no worse than P=1 (M=8, N=1e4)",
         criterion_neighbor_count(ctx));
  report(8, "7 feature combinations x 3 combine modes produce finite KL",
         criterion_feature_combinations(ctx));
  report(9, "reduction identities, exact lengths, finite outputs",
         criterion_reductions(ctx));
  report(10, "persistence round trip and byte-identical reports",
         criterion_persistence(ctx));

  if (failures > 0) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
