// Copyright 2026 The EmoTTS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace emotts::dsp {

// Band-limited resampling by Hann-windowed sinc interpolation. The cutoff
// follows the lower of the two Nyquist rates, so downsampling is
// anti-aliased.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> resample(
    const Eigen::MatrixBase<Derived>& x, int from_rate, int to_rate,
    int half_taps = 32) {
  using Scalar = typename Derived::Scalar;
  using Out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (from_rate == to_rate || x.size() == 0) return x;
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const double cutoff = std::min(1.0, ratio);
  const auto out_len = static_cast<Eigen::Index>(
      std::llround(static_cast<double>(x.size()) * ratio));
  const double pi = std::numbers::pi;
  const double support = half_taps / cutoff;
  Out y(out_len);
  for (Eigen::Index n = 0; n < out_len; ++n) {
    const double center = static_cast<double>(n) / ratio;
    const auto lo = static_cast<Eigen::Index>(std::ceil(center - support));
    const auto hi = static_cast<Eigen::Index>(std::floor(center + support));
    double acc = 0.0;
    for (Eigen::Index k = std::max<Eigen::Index>(lo, 0);
         k <= std::min<Eigen::Index>(hi, x.size() - 1); ++k) {
      const double t = static_cast<double>(k) - center;
      const double arg = cutoff * t;
      const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(pi * arg) / (pi * arg);
      const double window = 0.5 + 0.5 * std::cos(pi * t / support);
      acc += static_cast<double>(x(k)) * cutoff * sinc * window;
    }
    y(n) = static_cast<Scalar>(acc);
  }
  return y;
}

}  // namespace emotts::dsp
