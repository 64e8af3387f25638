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

#include "featinv/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "featinv/kernels.hpp"

namespace featinv {
namespace {

inline constexpr double kKlRatioFloor = 1e-12;

double frobenius_ratio(const MagSpectrogram& s, const MagSpectrogram& s_hat) {
  if (s.bins != s_hat.bins || s.frames != s_hat.frames) {
    throw Error("spectrogram shapes differ");
  }
  const double ref = kernels::sum_squares(s.values.data(), s.values.size());
  if (ref <= 0.0) throw Error("reference spectrogram is all-zero");
  const double diff = kernels::squared_diff_sum(
      s.values.data(), s_hat.values.data(), s.values.size());
  return std::sqrt(diff) / std::sqrt(ref);
}

}  // namespace

double relative_error_db(const MagSpectrogram& s,
                         const MagSpectrogram& s_hat) {
  const double r = frobenius_ratio(s, s_hat);
  return r > 0.0 ? std::max(20.0 * std::log10(r), kDbFloor) : kDbFloor;
}

double mse_db(const MagSpectrogram& s, const MagSpectrogram& s_hat) {
  const double r = frobenius_ratio(s, s_hat);
  return r > 0.0 ? std::max(10.0 * std::log10(r), kDbFloor) : kDbFloor;
}

MagSpectrogram normalize_spectrogram(const MagSpectrogram& s) {
  s.validate();
  const double total = kernels::sum(s.values.data(), s.values.size());
  if (total <= 0.0) {
    throw Error("cannot normalize an all-zero spectrogram");
  }
  MagSpectrogram out = s;
  kernels::scale(s.values.data(), 1.0 / total, out.values.data(),
                 out.values.size());
  return out;
}

double kl_divergence(const MagSpectrogram& s_n,
                     const MagSpectrogram& s_hat_n) {
  if (s_n.bins != s_hat_n.bins || s_n.frames != s_hat_n.frames) {
    throw Error("spectrogram shapes differ");
  }
  const double sum_p = kernels::sum(s_n.values.data(), s_n.values.size());
  const double sum_q =
      kernels::sum(s_hat_n.values.data(), s_hat_n.values.size());
  if (std::fabs(sum_p - 1.0) > 1e-9 || std::fabs(sum_q - 1.0) > 1e-9) {
    throw Error("kl_divergence inputs must be normalized to unit sum");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < s_n.values.size(); ++i) {
    const double p = s_n.values[i];
    if (p <= 0.0) continue;
    const double q = s_hat_n.values[i];
    kl += p * std::log((p + kKlRatioFloor) / (q + kKlRatioFloor));
  }
  return kl;
}

}  // namespace featinv
