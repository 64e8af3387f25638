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
#include <numbers>
#include <random>

#include "featinv/frame_features.hpp"
#include "featinv/segment_features.hpp"
#include "featinv/segmentation.hpp"
#include "featinv/stft.hpp"
#include "test_util.hpp"

using namespace featinv;
using namespace featinv::testutil;

namespace {

StftParams params(int frame_len, int hop) {
  StftParams p;
  p.frame_len = frame_len;
  p.hop = hop;
  p.window = WindowKind::kHann;
  return p;
}

// Straightforward mel + DCT reference, coded independently of the library
// implementation from the same documented definition: triangular filters
// linear in mel from 0 to the Nyquist mel, power spectrum, natural log
// with the 1e-10 floor, unnormalized type-II DCT skipping coefficient 0.
std::vector<double> mfcc_oracle_frame(const double* mag, int bins, int rate,
                                      int frame_len, int n_mels,
                                      int n_coeffs) {
  auto mel_of = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto hz_of = [](double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  };
  const double top = mel_of(rate / 2.0);
  std::vector<double> log_mel(n_mels);
  for (int b = 0; b < n_mels; ++b) {
    const double left = hz_of(top * b / (n_mels + 1));
    const double center = hz_of(top * (b + 1) / (n_mels + 1));
    const double right = hz_of(top * (b + 2) / (n_mels + 1));
    double energy = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * rate / frame_len;
      double weight = 0.0;
      if (f > left && f < right) {
        weight = f <= center ? (f - left) / (center - left)
                             : (right - f) / (right - center);
      }
      energy += weight * mag[k] * mag[k];
    }
    log_mel[b] = std::log(energy + 1e-10);
  }
  std::vector<double> coeffs(n_coeffs);
  for (int c = 1; c <= n_coeffs; ++c) {
    double acc = 0.0;
    for (int b = 0; b < n_mels; ++b) {
      acc += log_mel[b] * std::cos(std::numbers::pi * c * (b + 0.5) / n_mels);
    }
    coeffs[c - 1] = acc;
  }
  return coeffs;
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("ladder names and order") {
  const auto w = noise(1, 16000, 8000);
  const auto f3 = frame_features(w, params(1024, 256), FeatureSet::kLadder3);
  REQUIRE(f3.names.size() == 3);
  CHECK(f3.names[0] == "zcr");
  CHECK(f3.names[1] == "odf");
  CHECK(f3.names[2] == "energy");
  CHECK(feature_names(FeatureSet::kLadder8)[3] == "spectral_slope");
  CHECK(feature_names(FeatureSet::kLadder8)[6] == "spectral_flux");
  CHECK(feature_names(FeatureSet::kLadder11)[7] == "mfcc1");
  CHECK(feature_names(FeatureSet::kLadder21)[19] == "mfcc13");
}

TEST_CASE("ladder sets nest exactly") {
  const auto w = noise(2, 16000, 8000);
  const auto p = params(1024, 256);
  const auto f3 = frame_features(w, p, FeatureSet::kLadder3);
  const auto f8 = frame_features(w, p, FeatureSet::kLadder8);
  const auto f11 = frame_features(w, p, FeatureSet::kLadder11);
  const auto f21 = frame_features(w, p, FeatureSet::kLadder21);
  REQUIRE(f3.frames == f21.frames);
  for (std::size_t n = 0; n < f3.frames; ++n) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(f3.at(j, n) == f8.at(j, n));
    for (std::size_t j = 0; j < 7; ++j) CHECK(f8.at(j, n) == f11.at(j, n));
    for (std::size_t j = 0; j < 10; ++j) CHECK(f11.at(j, n) == f21.at(j, n));
  }
}

TEST_CASE("frame_features rejects msd27") {
  const auto w = noise(3, 16000, 4000);
  CHECK_THROWS_AS(frame_features(w, params(1024, 256), FeatureSet::kMsd27),
                  Error);
}

TEST_CASE("silence: zcr, odf and energy are zero") {
  const auto f = frame_features(silence(16000, 8000), params(1024, 256),
                                FeatureSet::kLadder3);
  for (std::size_t n = 0; n < f.frames; ++n) {
    CHECK(f.at(0, n) == 0.0);
    CHECK(f.at(1, n) == 0.0);
    CHECK(f.at(2, n) == 0.0);
  }
}

TEST_CASE("1 kHz sine: centroid and zcr closed forms") {
  const auto w = sine(1000, 16000, 16000);
  const auto f = frame_features(w, params(1024, 256), FeatureSet::kLadder8);
  const double bin_width = 16000.0 / 1024.0;
  // Skip the zero-padded trailing frames.
  for (std::size_t n = 0; n + 4 < f.frames; ++n) {
    CHECK(std::fabs(f.at(4, n) - 1000.0) <= bin_width);
    CHECK(f.at(0, n) == doctest::Approx(2.0 * 1000.0 / 16000.0).epsilon(0.05));
  }
}

TEST_CASE("spectral_flux basics") {
  std::mt19937_64 rng(4);
  auto single = random_mag(rng, 65, 1);
  CHECK(spectral_flux(single) == std::vector<double>{0.0});

  MagSpectrogram constant = random_mag(rng, 65, 5);
  for (std::size_t n = 1; n < 5; ++n) {
    std::copy(constant.col(0), constant.col(0) + 65, constant.col(n));
  }
  for (double v : spectral_flux(constant)) CHECK(v == 0.0);

  MagSpectrogram two = random_mag(rng, 65, 2);
  std::copy(two.col(0), two.col(0) + 65, two.col(1));
  two.col(1)[10] += 1.0;  // unit difference in one bin
  const auto flux = spectral_flux(two);
  CHECK(flux[0] == 0.0);
  CHECK(flux[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mfcc matches an independently coded mel+DCT reference") {
  std::mt19937_64 rng(5);
  const auto m = random_mag(rng, 513, 12, 16000);
  const auto out = mfcc(m, 26, 13);
  REQUIRE(out.dim() == 13);
  for (std::size_t n = 0; n < m.frames; ++n) {
    const auto expect =
        mfcc_oracle_frame(m.col(n), m.bins, 16000, 1024, 26, 13);
    for (int c = 0; c < 13; ++c) {
      CHECK(out.at(c, n) == doctest::Approx(expect[c]).epsilon(1e-9));
    }
  }
}

TEST_CASE("mfcc is deterministic") {
  std::mt19937_64 rng(6);
  const auto m = random_mag(rng, 257, 6, 16000);
  CHECK(mfcc(m, 26, 13).values == mfcc(m, 26, 13).values);
}

TEST_CASE("dct of a constant vector has zero higher coefficients") {
  std::vector<double> constant(26, 3.7);
  std::vector<double> coeffs(13);
  dct2(constant.data(), constant.size(), 1, 13, coeffs.data());
  for (double c : coeffs) CHECK(std::fabs(c) < 1e-6);
}

TEST_CASE("mfcc validates its arguments") {
  std::mt19937_64 rng(7);
  const auto m = random_mag(rng, 65, 2);
  CHECK_THROWS_AS(mfcc(m, 26, 27), Error);
}

TEST_CASE("segmentation: silence gives one whole-signal segment") {
  const auto segs = segment_onsets(silence(16000, 9000), params(1024, 256));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].start == 0);
  CHECK(segs[0].length == 9000);
}

TEST_CASE("segmentation: click train boundaries near the clicks") {
  const int rate = 16000;
  Waveform w = noise(8, rate, 4 * rate, 0.002);
  std::vector<long long> clicks;
  for (long long t = 4000; t < 4 * rate; t += 4000) {
    w.samples[t] = 0.9;
    clicks.push_back(t);
  }
  const auto p = params(256, 64);
  const auto segs = segment_onsets(w, p);
  for (long long click : clicks) {
    bool found = false;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (std::llabs(segs[i].start - click) <= p.frame_len) found = true;
    }
    CHECK_MESSAGE(found, "no boundary near click at ", click);
  }
  for (std::size_t i = 1; i + 1 < segs.size(); ++i) {
    CHECK(segs[i].length == doctest::Approx(4000.0).epsilon(0.2));
  }
}

TEST_CASE("segmentation tiles the signal") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    Waveform w = noise(seed, 16000, 32000, 0.3);
    // Bursts so there are onsets to find.
    for (std::size_t t = 5000; t < w.samples.size(); t += 7000) {
      for (std::size_t u = t; u < t + 600 && u < w.samples.size(); ++u) {
        w.samples[u] *= 3.0;
      }
    }
    const auto segs = segment_onsets(w, params(1024, 256));
    long long pos = 0;
    for (const Segment& s : segs) {
      CHECK(s.start == pos);
      CHECK(s.length >= 1);
      pos = s.start + s.length;
    }
    CHECK(pos == static_cast<long long>(w.samples.size()));
  }
}

TEST_CASE("chroma: silence, pitch classes and octave folding") {
  const auto zeros = chroma(silence(16000, 8000));
  for (double v : zeros) CHECK(v == 0.0);

  const auto a4 = chroma(sine(440, 16000, 8000));
  const auto a5 = chroma(sine(880, 16000, 8000));
  const int argmax_a4 =
      static_cast<int>(std::max_element(a4.begin(), a4.end()) - a4.begin());
  const int argmax_a5 =
      static_cast<int>(std::max_element(a5.begin(), a5.end()) - a5.begin());
  CHECK(argmax_a4 == 9);  // pitch class A
  CHECK(argmax_a5 == argmax_a4);
}

TEST_CASE("chroma is invariant to amplitude scaling") {
  Waveform w = noise(14, 16000, 6000, 0.2);
  const auto tone = sine(330, 16000, 6000, 0.4);
  for (std::size_t t = 0; t < w.samples.size(); ++t) {
    w.samples[t] += tone.samples[t];
  }
  Waveform scaled = w;
  for (auto& s : scaled.samples) s *= 3.0;
  const auto a = chroma(w);
  const auto b = chroma(scaled);
  for (int j = 0; j < 12; ++j) CHECK(std::fabs(a[j] - b[j]) <= 1e-9);
}

TEST_CASE("timbre: silence is the log floor in coefficient 1 only") {
  const auto t = timbre_surrogate(silence(16000, 4000));
  CHECK(t[0] == doctest::Approx(-100.0).epsilon(1e-9));
  for (int j = 1; j < 12; ++j) CHECK(std::fabs(t[j]) < 1e-9);
}

TEST_CASE("timbre is deterministic") {
  const auto w = noise(15, 16000, 5000);
  CHECK(timbre_surrogate(w) == timbre_surrogate(w));
}

TEST_CASE("timbre: amplitude scaling moves only the DC-like coefficient") {
  const auto w = noise(16, 16000, 6000, 0.3);
  Waveform doubled = w;
  for (auto& s : doubled.samples) s *= 2.0;
  const auto a = timbre_surrogate(w);
  const auto b = timbre_surrogate(doubled);
  CHECK(std::fabs(b[0] - a[0]) > 1e-3);  // the mean shifts
  for (int j = 1; j < 12; ++j) CHECK(std::fabs(a[j] - b[j]) < 1e-6);
}

TEST_CASE("loudness triple: constant amplitude") {
  Waveform w = silence(16000, 8000);
  for (auto& s : w.samples) s = 0.25;
  const auto l = loudness_triple(w);
  CHECK(l.start == l.peak);
  // The first frame attains the peak; its center is frame_len/2.
  CHECK(l.peak_position == doctest::Approx(128.0 / 8000.0).epsilon(1e-12));
}

TEST_CASE("loudness triple: rising envelope peaks late") {
  Waveform w = silence(16000, 8000);
  for (std::size_t t = 0; t < w.samples.size(); ++t) {
    w.samples[t] = 0.5 * t / w.samples.size();
  }
  CHECK(loudness_triple(w).peak_position > 0.5);
}

TEST_CASE("loudness triple: impulse at the midpoint") {
  Waveform w = silence(16000, 16000);
  w.samples[8000] = 0.9;
  const auto l = loudness_triple(w);
  CHECK(std::fabs(l.peak_position - 0.5) <= 256.0 / 16000.0);
}

TEST_CASE("segment_features order and content") {
  // Two known tones segmented at the join.
  const int rate = 16000;
  Waveform w = silence(rate, 16000);
  const auto a = sine(440, rate, 8000, 0.5);     // A
  const auto c = sine(523.25, rate, 8000, 0.5);  // C
  std::copy(a.samples.begin(), a.samples.end(), w.samples.begin());
  std::copy(c.samples.begin(), c.samples.end(), w.samples.begin() + 8000);
  const std::vector<Segment> segs = {{0, 8000}, {8000, 8000}};
  const auto feats = segment_features(w, segs);
  REQUIRE(feats.size() == 2);
  const auto& f0 = feats[0].chroma;
  const auto& f1 = feats[1].chroma;
  const int m0 =
      static_cast<int>(std::max_element(f0.begin(), f0.end()) - f0.begin());
  const int m1 =
      static_cast<int>(std::max_element(f1.begin(), f1.end()) - f1.begin());
  CHECK(m0 == 9);  // A
  CHECK(m1 == 0);  // C
  CHECK(m0 != m1);
}

TEST_CASE("segment_features: a silent segment floors cleanly") {
  const auto feats = segment_features(silence(16000, 6000), {{0, 6000}});
  REQUIRE(feats.size() == 1);
  for (double v : feats[0].chroma) CHECK(v == 0.0);
  CHECK(feats[0].timbre[0] == doctest::Approx(-100.0).epsilon(1e-9));
  CHECK(feats[0].loudness_peak == doctest::Approx(-100.0).epsilon(1e-9));
  CHECK(feats[0].loudness_start == feats[0].loudness_peak);
}

TEST_CASE("segment_features validates segment lists") {
  const auto w = noise(17, 16000, 4000);
  CHECK_THROWS_AS(segment_features(w, {{0, 3000}, {2000, 2000}}), Error);
  CHECK_THROWS_AS(segment_features(w, {{0, 5000}}), Error);
}

TEST_CASE("all features stay finite on random input and silence") {
  for (const Waveform& w : {noise(18, 16000, 8000), silence(16000, 8000)}) {
    const auto f = frame_features(w, params(1024, 256), FeatureSet::kLadder21);
    for (double v : f.values) CHECK(std::isfinite(v));
    const auto feats =
        segment_features(w, {{0, static_cast<long long>(w.samples.size())}});
    for (double v : feats[0].flatten()) CHECK(std::isfinite(v));
  }
}

}  // TEST_SUITE
