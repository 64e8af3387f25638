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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "featinv/experiment.hpp"
#include "featinv/metrics.hpp"
#include "corpus.hpp"
#include "test_util.hpp"

using namespace featinv;
using namespace featinv::testutil;

TEST_SUITE("eval") {

TEST_CASE("relative_error_db special cases") {
  std::mt19937_64 rng(41);
  const auto s = random_mag(rng, 65, 10);
  CHECK(relative_error_db(s, s) == -300.0);

  MagSpectrogram zero = s;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK(relative_error_db(s, zero) == 0.0);
  CHECK_THROWS_AS(relative_error_db(zero, s), Error);
}

TEST_CASE("constructed 0.1-relative perturbation scores -20 dB") {
  std::mt19937_64 rng(42);
  const auto s = random_mag(rng, 65, 10);
  const auto direction = random_vector(rng, s.values.size());
  double s_norm = 0.0, d_norm = 0.0;
  for (double v : s.values) s_norm += v * v;
  for (double v : direction) d_norm += v * v;
  const double scale = 0.1 * std::sqrt(s_norm) / std::sqrt(d_norm);
  MagSpectrogram perturbed = s;
  for (std::size_t i = 0; i < perturbed.values.size(); ++i) {
    perturbed.values[i] = s.values[i] + scale * direction[i];
  }
  CHECK(std::fabs(relative_error_db(s, perturbed) - (-20.0)) <= 1e-9);
  CHECK(std::fabs(mse_db(s, perturbed) - (-10.0)) <= 1e-9);
}

TEST_CASE("mse_db is exactly half of relative_error_db") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_mag(rng, 33, 6);
    const auto s_hat = random_mag(rng, 33, 6);
    CHECK(mse_db(s, s_hat) ==
          doctest::Approx(0.5 * relative_error_db(s, s_hat)).epsilon(1e-12));
  }
}

TEST_CASE("normalize_spectrogram sums to one and is scale invariant") {
  std::mt19937_64 rng(44);
  const auto s = random_mag(rng, 65, 12);
  const auto n = normalize_spectrogram(s);
  double total = 0.0;
  for (double v : n.values) total += v;
  CHECK(std::fabs(total - 1.0) <= 1e-12);

  MagSpectrogram doubled = s;
  for (double& v : doubled.values) v *= 2.0;
  CHECK(normalize_spectrogram(doubled).values == n.values);

  MagSpectrogram tripled = s;
  for (double& v : tripled.values) v *= 3.0;
  const auto n3 = normalize_spectrogram(tripled);
  for (std::size_t i = 0; i < n.values.size(); ++i) {
    CHECK(n3.values[i] == doctest::Approx(n.values[i]).epsilon(1e-12));
  }

  MagSpectrogram uniform = s;
  std::fill(uniform.values.begin(), uniform.values.end(), 2.5);
  const auto nu = normalize_spectrogram(uniform);
  for (double v : nu.values) {
    CHECK(v == doctest::Approx(1.0 / uniform.values.size()).epsilon(1e-12));
  }

  MagSpectrogram zero = s;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK_THROWS_AS(normalize_spectrogram(zero), Error);
}

TEST_CASE("kl divergence axioms and hand value") {
  std::mt19937_64 rng(45);
  const auto p = normalize_spectrogram(random_mag(rng, 65, 8));
  CHECK(std::fabs(kl_divergence(p, p)) <= 1e-9);

  for (int rep = 0; rep < 100; ++rep) {
    const auto a = normalize_spectrogram(random_mag(rng, 17, 4));
    const auto b = normalize_spectrogram(random_mag(rng, 17, 4));
    CHECK(kl_divergence(a, b) >= -1e-9);
  }

  // Two explicit 2x1 distributions: 0.9 ln(1.8) + 0.1 ln(0.2).
  MagSpectrogram pa, pb;
  pa.bins = pb.bins = 2;
  pa.frames = pb.frames = 1;
  pa.values = {0.9, 0.1};
  pb.values = {0.5, 0.5};
  const double expected = 0.9 * std::log(1.8) + 0.1 * std::log(0.2);
  CHECK(std::fabs(kl_divergence(pa, pb) - expected) <= 1e-9);

  MagSpectrogram not_normalized = pa;
  not_normalized.values = {0.9, 0.3};
  CHECK_THROWS_AS(kl_divergence(pa, not_normalized), Error);
}

TEST_CASE("experiments are reproducible from the split seed") {
  testsupport::CorpusSpec cspec;
  cspec.files = 6;
  cspec.seconds_per_file = 6.0;
  cspec.seed = 99;
  const auto paths = testsupport::generate_corpus("eval_test_corpus", cspec);

  ExperimentSpec spec;
  spec.mode = DbMode::kFrame;
  spec.m_labels = {3};
  spec.n_values = {200};
  spec.p_values = {3};
  spec.trials = 2;
  spec.split_seed = 7;
  spec.excerpt_frames = 50;
  spec.stft.frame_len = 1024;
  spec.stft.hop = 256;

  const auto a = run_experiment(spec, paths, SynthMethod::kFrameMedian);
  const auto b = run_experiment(spec, paths, SynthMethod::kFrameMedian);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].seed == b.rows[i].seed);
    CHECK(a.rows[i].relative_error_db == b.rows[i].relative_error_db);
    CHECK(a.rows[i].mse_db == b.rows[i].mse_db);
    CHECK(a.rows[i].kl == b.rows[i].kl);
    // Split hygiene in frame mode: the dev pool never contains the test
    // file.
    for (std::size_t dev : a.rows[i].dev_files) {
      CHECK(dev != a.rows[i].test_file);
    }
  }

  write_report_csv(a, "eval_report_a.csv");
  write_report_csv(b, "eval_report_b.csv");
  std::ifstream fa("eval_report_a.csv"), fb("eval_report_b.csv");
  const std::string ca((std::istreambuf_iterator<char>(fa)),
                       std::istreambuf_iterator<char>());
  const std::string cb((std::istreambuf_iterator<char>(fb)),
                       std::istreambuf_iterator<char>());
  CHECK(ca == cb);
  CHECK(ca.find("M,N,P,method,feature_combo,seed") == 0);
}

TEST_CASE("experiment split hygiene: dev and test never share a file") {
  testsupport::CorpusSpec cspec;
  cspec.files = 6;
  cspec.seconds_per_file = 6.0;
  cspec.seed = 99;
  const auto paths = testsupport::generate_corpus("eval_test_corpus", cspec);

  ExperimentSpec spec;
  spec.mode = DbMode::kSegment;
  spec.n_values = {40};
  spec.p_values = {2};
  spec.combos = {"chroma,timbre"};
  spec.trials = 3;
  spec.split_seed = 11;
  spec.excerpt_segments = 5;
  spec.genre_exclusion = true;
  spec.stft.frame_len = 1024;
  spec.stft.hop = 256;

  const auto report = run_experiment(spec, paths, SynthMethod::kAddMedian);
  REQUIRE(!report.rows.empty());
  for (const TrialResult& row : report.rows) {
    CHECK(row.kl >= -1e-9);
    CHECK(std::isfinite(row.kl));
    const std::string test_genre = genre_of(paths[row.test_file]);
    for (std::size_t dev : row.dev_files) {
      CHECK(dev != row.test_file);
      CHECK(genre_of(paths[dev]) != test_genre);
    }
  }
}

TEST_CASE("experiment errors name the violated cell") {
  testsupport::CorpusSpec cspec;
  cspec.files = 3;
  cspec.seconds_per_file = 4.0;
  cspec.seed = 98;
  const auto paths = testsupport::generate_corpus("eval_small_corpus", cspec);

  ExperimentSpec spec;
  spec.mode = DbMode::kFrame;
  spec.m_labels = {3};
  spec.n_values = {100000};  // more than the corpus can supply
  spec.p_values = {2};
  spec.trials = 1;
  spec.excerpt_frames = 20;
  spec.stft.frame_len = 1024;
  spec.stft.hop = 256;

  try {
    run_experiment(spec, paths, SynthMethod::kFrameMedian);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("N=100000") != std::string::npos);
  }
}

TEST_CASE("error improves with database size on a desk corpus") {
  testsupport::CorpusSpec cspec;
  cspec.files = 8;
  cspec.seconds_per_file = 8.0;
  cspec.seed = 101;
  const auto paths = testsupport::generate_corpus("eval_trend_corpus", cspec);

  ExperimentSpec spec;
  spec.mode = DbMode::kFrame;
  spec.m_labels = {3, 8};
  spec.n_values = {300, 1500};
  spec.p_values = {10};
  spec.trials = 4;
  spec.split_seed = 5;
  spec.excerpt_frames = 60;
  spec.stft.frame_len = 1024;
  spec.stft.hop = 256;

  const auto report = run_experiment(spec, paths, SynthMethod::kFrameMedian);
  for (int m : {3, 8}) {
    double small_n = 0.0, large_n = 0.0;
    int count_small = 0, count_large = 0;
    for (const TrialResult& row : report.rows) {
      if (row.m_label != m) continue;
      if (row.n == 300) {
        small_n += row.relative_error_db;
        ++count_small;
      } else {
        large_n += row.relative_error_db;
        ++count_large;
      }
    }
    REQUIRE(count_small == 4);
    REQUIRE(count_large == 4);
    CHECK(large_n / count_large < small_n / count_small);
  }
}

}  // TEST_SUITE
