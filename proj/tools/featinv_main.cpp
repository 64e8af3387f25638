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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "featinv/analysis_json.hpp"
#include "featinv/database.hpp"
#include "featinv/experiment.hpp"
#include "featinv/kernels.hpp"
#include "featinv/metrics.hpp"
#include "featinv/stft.hpp"
#include "featinv/synth.hpp"
#include "featinv/wav.hpp"

namespace fs = std::filesystem;
using namespace featinv;

namespace {

// Command-line level problems (unknown flags, missing files) exit with 2;
// runtime failures exit with 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct StftFlags {
  int frame_len = 1024;
  int hop = 256;
  std::string window = "hann";

  void attach(CLI::App* cmd) {
    cmd->add_option("--frame-len", frame_len, "STFT frame length in samples");
    cmd->add_option("--hop", hop, "STFT hop in samples");
    cmd->add_option("--window", window, "Analysis window (hann|rectangular)");
  }
  StftParams params() const {
    StftParams p;
    p.frame_len = frame_len;
    p.hop = hop;
    p.window = parse_window_kind(window);
    p.validate();
    return p;
  }
};

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("no such file: " + path);
}

std::vector<std::string> collect_audio(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const std::string& input : inputs) {
    require_file(input);
    if (fs::is_directory(input)) {
      for (const auto& e : fs::recursive_directory_iterator(input)) {
        if (e.is_regular_file() && e.path().extension() == ".wav") {
          files.push_back(e.path().string());
        }
      }
    } else {
      files.push_back(input);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .wav files found in the inputs");
  return files;
}

bool has_extension(const std::string& path, const char* ext) {
  return fs::path(path).extension() == ext;
}

WeightVector weights_from_flags(const std::string& use_groups,
                                const std::string& raw_weights,
                                std::size_t dim) {
  if (!raw_weights.empty()) {
    WeightVector wv;
    std::stringstream ss(raw_weights);
    std::string token;
    while (std::getline(ss, token, ',')) wv.w.push_back(std::stod(token));
    if (wv.w.size() != dim) {
      throw UsageError("--weights needs " + std::to_string(dim) + " values");
    }
    wv.validate();
    return wv;
  }
  if (!use_groups.empty()) {
    bool c = false, t = false, l = false;
    std::stringstream ss(use_groups);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token == "chroma") {
        c = true;
      } else if (token == "timbre") {
        t = true;
      } else if (token == "loudness") {
        l = true;
      } else {
        throw UsageError("--use accepts chroma, timbre, loudness");
      }
    }
    if (dim != kSegmentFeatureDim) {
      throw UsageError("--use applies to msd27 (segment-mode) databases");
    }
    return WeightVector::for_groups(c, t, l);
  }
  return WeightVector::ones(dim);
}

int cmd_extract(const std::string& in_path, const std::string& out_path,
                const StftFlags& stft_flags) {
  require_file(in_path);
  const Waveform w = read_wav(in_path);
  const AnalysisDocument doc = analyze_waveform(
      w, stft_flags.params(), fs::path(in_path).stem().string());
  write_analysis_document(doc, out_path);
  std::printf("wrote %zu segments to %s\n", doc.segments.size(),
              out_path.c_str());
  return 0;
}

int cmd_build_db(const std::vector<std::string>& inputs,
                 const std::string& mode_name, std::string set_name,
                 const std::string& out_dir, const StftFlags& stft_flags) {
  const DbMode mode = parse_db_mode(mode_name);
  if (set_name.empty()) {
    set_name = mode == DbMode::kFrame ? "8" : "msd27";
  }
  const FeatureSet set = parse_feature_set(set_name);
  const std::vector<std::string> files = collect_audio(inputs);
  const DevDatabase db = build_database(files, mode, set, stft_flags.params());
  save_database(db, out_dir);
  std::printf("built %s-mode database: %zu entries from %zu files -> %s\n",
              to_string(mode), db.size(), db.files.size(), out_dir.c_str());
  return 0;
}

int cmd_synth(const std::string& db_dir, const std::string& target_path,
              const std::string& out_path, const std::string& method_name,
              std::size_t p, const std::string& use_groups,
              const std::string& raw_weights, double lambda_v, int gl_iters,
              std::uint64_t gl_seed, double fade_ms) {
  require_file(db_dir);
  require_file(target_path);
  const DevDatabase db = load_database(db_dir);

  SynthConfig cfg;
  cfg.method = parse_synth_method(method_name);
  cfg.neighbors = p;
  cfg.weights = weights_from_flags(use_groups, raw_weights, db.dim);
  cfg.lambda_v = lambda_v;
  cfg.gl_iters = gl_iters;
  cfg.gl_seed = gl_seed;
  cfg.boundary_fade_ms = fade_ms;

  Waveform out;
  if (cfg.method == SynthMethod::kFrameMedian) {
    if (!has_extension(target_path, ".wav")) {
      throw UsageError("frame-median needs a WAV target");
    }
    const FrameTarget target = make_frame_target(read_wav(target_path), db);
    out = additive_synthesize(target, db, cfg);
  } else {
    SegmentTarget target;
    if (has_extension(target_path, ".json")) {
      target = make_segment_target(parse_analysis_document(target_path), db);
    } else {
      target = make_segment_target(read_wav(target_path), db);
    }
    switch (cfg.method) {
      case SynthMethod::kCrossPlain:
        out = cross_plain(target, db, cfg);
        break;
      case SynthMethod::kCrossNormalized:
        out = cross_normalized(target, db, cfg);
        break;
      case SynthMethod::kCrossPenalized:
        out = cross_penalized(target, db, cfg);
        break;
      default:
        out = additive_synthesize(target, db, cfg);
        break;
    }
  }
  write_wav(out, out_path);
  std::printf("wrote %s (%.2f s, %s)\n", out_path.c_str(),
              out.duration_seconds(), to_string(cfg.method));
  return 0;
}

int cmd_eval(const std::string& ref_path, const std::string& est_path,
             const StftFlags& stft_flags, const std::string& json_out) {
  require_file(ref_path);
  require_file(est_path);
  const StftParams params = stft_flags.params();
  const MagSpectrogram ref = magnitude(stft(read_wav(ref_path), params));
  MagSpectrogram est = magnitude(stft(read_wav(est_path), params));
  if (est.frames != ref.frames) {
    // Compare over the common span when lengths differ slightly.
    const std::size_t frames = std::min(ref.frames, est.frames);
    MagSpectrogram ref2 = ref;
    ref2.frames = frames;
    ref2.values.resize(frames * static_cast<std::size_t>(ref.bins));
    est.frames = frames;
    est.values.resize(frames * static_cast<std::size_t>(est.bins));
    const double re = relative_error_db(ref2, est);
    const double mse = mse_db(ref2, est);
    const double kl = kl_divergence(normalize_spectrogram(ref2),
                                    normalize_spectrogram(est));
    std::printf("relative_error_db=%.6f mse_db=%.6f kl=%.6f\n", re, mse, kl);
    return 0;
  }
  const double re = relative_error_db(ref, est);
  const double mse = mse_db(ref, est);
  const double kl =
      kl_divergence(normalize_spectrogram(ref), normalize_spectrogram(est));
  std::printf("relative_error_db=%.6f mse_db=%.6f kl=%.6f\n", re, mse, kl);
  if (!json_out.empty()) {
    nlohmann::ordered_json j;
    j["relative_error_db"] = re;
    j["mse_db"] = mse;
    j["kl"] = kl;
    std::ofstream out(json_out);
    out << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_experiment(const std::vector<std::string>& inputs,
                   const std::string& mode_name,
                   const std::vector<std::string>& method_names,
                   const std::vector<int>& m_labels,
                   const std::vector<std::size_t>& n_values,
                   const std::vector<std::size_t>& p_values,
                   const std::vector<std::string>& combos, int trials,
                   std::uint64_t seed, bool genre_exclusion,
                   std::size_t excerpt_frames, std::size_t excerpt_segments,
                   const StftFlags& stft_flags, const std::string& csv_path,
                   const std::string& json_path) {
  ExperimentSpec spec;
  spec.mode = parse_db_mode(mode_name);
  spec.m_labels = m_labels;
  spec.n_values = n_values;
  spec.p_values = p_values;
  spec.combos = combos;
  spec.trials = trials;
  spec.split_seed = seed;
  spec.genre_exclusion = genre_exclusion;
  spec.stft = stft_flags.params();
  spec.excerpt_frames = excerpt_frames;
  spec.excerpt_segments = excerpt_segments;

  const std::vector<std::string> files = collect_audio(inputs);
  ExperimentReport all;
  for (const std::string& name : method_names) {
    const SynthMethod method = parse_synth_method(name);
    ExperimentReport r = run_experiment(spec, files, method);
    for (auto& row : r.rows) all.rows.push_back(std::move(row));
  }
  if (!csv_path.empty()) write_report_csv(all, csv_path);
  if (!json_path.empty()) write_report_summary_json(all, json_path);
  std::printf("experiment finished: %zu trials (kernels: %s)\n",
              all.rows.size(),
              kernels::backend_name(kernels::active_backend()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exemplar-based audio reconstruction from acoustic features"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand(
      "extract", "Extract segment features from audio into an analysis JSON");
  std::string ex_in, ex_out;
  StftFlags ex_stft;
  extract->add_option("--in", ex_in, "Input WAV")->required();
  extract->add_option("--out", ex_out, "Output analysis JSON")->required();
  ex_stft.attach(extract);

  // build-db
  auto* build = app.add_subcommand(
      "build-db", "Build and persist a development database");
  std::vector<std::string> bd_inputs;
  std::string bd_mode = "segment", bd_set, bd_out;
  StftFlags bd_stft;
  build->add_option("inputs", bd_inputs, "WAV files or directories")
      ->required();
  build->add_option("--mode", bd_mode, "frame|segment");
  build->add_option("--set", bd_set, "Feature set: 3|8|11|21|msd27");
  build->add_option("--out", bd_out, "Output database directory")->required();
  bd_stft.attach(build);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Synthesize audio for a target from a database");
  std::string sy_db, sy_target, sy_out, sy_method = "cross-plain";
  std::string sy_use, sy_weights;
  std::size_t sy_p = 10;
  double sy_lambda = 1.0, sy_fade = 0.0;
  int sy_gl_iters = kDefaultGriffinLimIters;
  std::uint64_t sy_gl_seed = 0;
  synth->add_option("--db", sy_db, "Database directory")->required();
  synth->add_option("--target", sy_target, "Target WAV or analysis JSON")
      ->required();
  synth->add_option("--out", sy_out, "Output WAV")->required();
  synth->add_option("--method", sy_method,
                    "cross-plain|cross-normalized|cross-penalized|"
                    "add-median|add-mean|add-max|frame-median");
  synth->add_option("--P", sy_p, "Neighbor count");
  synth->add_option("--use", sy_use,
                    "Feature groups for the distance: chroma,timbre,loudness");
  synth->add_option("--weights", sy_weights,
                    "Raw per-feature weights, comma separated");
  synth->add_option("--lambda-v", sy_lambda, "Viterbi file-change penalty");
  synth->add_option("--gl-iters", sy_gl_iters, "Griffin-Lim iterations");
  synth->add_option("--gl-seed", sy_gl_seed, "Griffin-Lim phase seed");
  synth->add_option("--fade-ms", sy_fade,
                    "Linear fade at segment boundaries (ms, 0 = off)");

  // eval
  auto* eval = app.add_subcommand(
      "eval", "Score a synthesized WAV against the reference audio");
  std::string ev_ref, ev_est, ev_json;
  StftFlags ev_stft;
  eval->add_option("--ref", ev_ref, "Reference WAV")->required();
  eval->add_option("--est", ev_est, "Estimate WAV")->required();
  eval->add_option("--json", ev_json, "Optional JSON metrics output");
  ev_stft.attach(eval);

  // experiment
  auto* exp = app.add_subcommand(
      "experiment", "Run the randomized split evaluation grid");
  std::vector<std::string> xp_inputs, xp_methods = {"frame-median"};
  std::vector<std::string> xp_combos = {"all"};
  std::string xp_mode = "frame", xp_csv, xp_json;
  std::vector<int> xp_m = {8};
  std::vector<std::size_t> xp_n = {1000};
  std::vector<std::size_t> xp_p = {10};
  int xp_trials = 25;
  std::uint64_t xp_seed = 0;
  bool xp_genre = false;
  std::size_t xp_excerpt_frames = 200, xp_excerpt_segments = 20;
  StftFlags xp_stft;
  exp->add_option("--corpus", xp_inputs, "Corpus WAVs or directories")
      ->required();
  exp->add_option("--mode", xp_mode, "frame|segment");
  exp->add_option("--methods", xp_methods, "Synthesis methods")
      ->delimiter(',');
  exp->add_option("--M", xp_m, "Feature ladder labels")->delimiter(',');
  exp->add_option("--N", xp_n, "Dev database sizes")->delimiter(',');
  exp->add_option("--P", xp_p, "Neighbor counts")->delimiter(',');
  exp->add_option("--combos", xp_combos,
                  "Feature combinations, e.g. chroma+timbre as "
                  "'chroma,timbre'; separate combos with ';'")
      ->delimiter(';');
  exp->add_option("--trials", xp_trials, "Trials per cell");
  exp->add_option("--seed", xp_seed, "Split seed");
  exp->add_flag("--genre-exclusion", xp_genre,
                "Drop dev segments sharing the test file's genre");
  exp->add_option("--excerpt-frames", xp_excerpt_frames,
                  "Frame-mode test excerpt length");
  exp->add_option("--excerpt-segments", xp_excerpt_segments,
                  "Segment-mode test excerpt length");
  exp->add_option("--csv", xp_csv, "CSV output path");
  exp->add_option("--json", xp_json, "JSON summary path");
  xp_stft.attach(exp);

  try {
    app.parse(argc, argv);
    if (extract->parsed()) return cmd_extract(ex_in, ex_out, ex_stft);
    if (build->parsed()) {
      return cmd_build_db(bd_inputs, bd_mode, bd_set, bd_out, bd_stft);
    }
    if (synth->parsed()) {
      return cmd_synth(sy_db, sy_target, sy_out, sy_method, sy_p, sy_use,
                       sy_weights, sy_lambda, sy_gl_iters, sy_gl_seed,
                       sy_fade);
    }
    if (eval->parsed()) return cmd_eval(ev_ref, ev_est, ev_stft, ev_json);
    if (exp->parsed()) {
      return cmd_experiment(xp_inputs, xp_mode, xp_methods, xp_m, xp_n, xp_p,
                            xp_combos, xp_trials, xp_seed, xp_genre,
                            xp_excerpt_frames, xp_excerpt_segments, xp_stft,
                            xp_csv, xp_json);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "featinv: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "featinv: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "featinv: %s\n", e.what());
    return 1;
  }
}
