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

#include <cstdint>
#include <string>
#include <vector>

#include "featinv/synth.hpp"
#include "featinv/types.hpp"

namespace featinv {

// Randomized dev/test split evaluation over an (M, N, P) x feature-combo
// grid. Every trial draws a dev subset and a disjoint test excerpt (never
// sharing a source file; optionally excluding the test file's genre),
// synthesizes, and scores against the original spectrogram. Fully
// reproducible from split_seed.
struct ExperimentSpec {
  DbMode mode = DbMode::kFrame;
  std::vector<int> m_labels = {8};          // ladder labels; segment mode uses 27
  std::vector<std::size_t> n_values = {1000};
  std::vector<std::size_t> p_values = {10};
  std::vector<std::string> combos = {"all"};  // chroma/timbre/loudness subsets
  int trials = 25;
  std::uint64_t split_seed = 0;
  bool genre_exclusion = false;
  StftParams stft;
  std::size_t excerpt_frames = 200;
  std::size_t excerpt_segments = 20;
  int gl_iters = kDefaultGriffinLimIters;
};

struct TrialResult {
  int m_label = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::string method;
  std::string combo;
  std::uint64_t seed = 0;
  double relative_error_db = 0.0;
  double mse_db = 0.0;
  double kl = 0.0;
  // Split metadata for hygiene checks; not serialized.
  std::size_t test_file = 0;
  std::vector<std::size_t> dev_files;
};

struct ExperimentReport {
  std::vector<TrialResult> rows;
};

// Genre label of a corpus file: the basename up to the first '.'
// (GTZAN-style naming such as blues.00001.wav).
std::string genre_of(const std::string& path);

FeatureSet feature_set_for_label(int m_label);

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<std::string>& corpus,
                                SynthMethod method);

// One CSV row per trial; byte-identical for identical seeds.
void write_report_csv(const ExperimentReport& report, const std::string& path);
// Per-cell means as ordered JSON.
void write_report_summary_json(const ExperimentReport& report,
                               const std::string& path);

}  // namespace featinv
