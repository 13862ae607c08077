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

// Short-time Fourier analysis, its least-squares inverse, and the Slaney-style
// mel filterbank. Everything is templated on the real scalar type; signals are
// column vectors, spectrograms are (frames x bins) matrices.

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "emotts/dsp/audio_config.h"
#include "emotts/errors.h"

namespace emotts::dsp {

template <typename Scalar>
using Signal = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

// Periodic Hann window of length n.
template <typename Scalar>
Signal<Scalar> hann_window(int n) {
  Signal<Scalar> w(n);
  for (int i = 0; i < n; ++i) {
    w(i) = Scalar(0.5) - Scalar(0.5) * std::cos(Scalar(2) * std::numbers::pi_v<Scalar> *
                                                 Scalar(i) / Scalar(n));
  }
  return w;
}

// Mirror index into [0, n) without repeating the edge sample.
inline Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
  if (n == 1) return 0;
  const Eigen::Index period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// Pads `pad` samples on both sides by reflection.
template <typename Derived>
Signal<typename Derived::Scalar> reflect_pad(const Eigen::MatrixBase<Derived>& x,
                                             Eigen::Index pad) {
  const Eigen::Index n = x.size();
  Signal<typename Derived::Scalar> out(n + 2 * pad);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = x(reflect_index(i - pad, n));
  }
  return out;
}

// Centered framing: frame f covers padded samples [f*hop, f*hop + n_fft).
inline Eigen::Index centered_frame_count(Eigen::Index samples, int hop) {
  return 1 + samples / hop;
}

// Real FFT helper returning the n/2+1 non-negative bins.
template <typename Scalar>
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) { fft_.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum); }

  int size() const { return n_; }

  template <typename Derived>
  Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> forward(
      const Eigen::MatrixBase<Derived>& frame) {
    time_.assign(frame.derived().data(), frame.derived().data() + n_);
    fft_.fwd(freq_, time_);
    Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> out(n_ / 2 + 1);
    for (int k = 0; k <= n_ / 2; ++k) out(k) = freq_[static_cast<std::size_t>(k)];
    return out;
  }

  template <typename Derived>
  Signal<Scalar> inverse(const Eigen::MatrixBase<Derived>& half) {
    freq_.assign(static_cast<std::size_t>(n_ / 2 + 1), {});
    for (int k = 0; k <= n_ / 2; ++k) freq_[static_cast<std::size_t>(k)] = half(k);
    fft_.inv(time_, freq_, n_);
    return Eigen::Map<const Signal<Scalar>>(time_.data(), n_);
  }

 private:
  int n_;
  Eigen::FFT<Scalar> fft_;
  std::vector<Scalar> time_;
  std::vector<std::complex<Scalar>> freq_;
};

// Windowed STFT of an already padded signal: frame f starts at f*hop.
// Returns (frames x n_fft/2+1).
template <typename Derived>
ComplexMatrix<typename Derived::Scalar> stft_frames(
    const Eigen::MatrixBase<Derived>& padded, int n_fft, int hop,
    const Signal<typename Derived::Scalar>& window) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index frames =
      padded.size() < n_fft ? 0 : 1 + (padded.size() - n_fft) / hop;
  ComplexMatrix<Scalar> spec(frames, n_fft / 2 + 1);
  RealFft<Scalar> fft(n_fft);
  Signal<Scalar> frame(n_fft);
  for (Eigen::Index f = 0; f < frames; ++f) {
    frame = padded.segment(f * hop, n_fft).cwiseProduct(window);
    spec.row(f) = fft.forward(frame);
  }
  return spec;
}

// Least-squares inverse of stft_frames (window-square normalised
// overlap-add). Output length is (frames-1)*hop + n_fft.
template <typename Scalar>
Signal<Scalar> istft_frames(const ComplexMatrix<Scalar>& spec, int n_fft,
                            int hop, const Signal<Scalar>& window) {
  const Eigen::Index frames = spec.rows();
  const Eigen::Index len = frames == 0 ? 0 : (frames - 1) * hop + n_fft;
  Signal<Scalar> out = Signal<Scalar>::Zero(len);
  Signal<Scalar> norm = Signal<Scalar>::Zero(len);
  RealFft<Scalar> fft(n_fft);
  const Signal<Scalar> window_sq = window.cwiseAbs2();
  for (Eigen::Index f = 0; f < frames; ++f) {
    out.segment(f * hop, n_fft) += fft.inverse(spec.row(f)).cwiseProduct(window);
    norm.segment(f * hop, n_fft) += window_sq;
  }
  for (Eigen::Index i = 0; i < len; ++i) {
    if (norm(i) > Scalar(1e-10)) out(i) /= norm(i);
  }
  return out;
}

// Magnitude STFT with centered reflect padding of n_fft/2; the window is a
// periodic Hann of win_length zero-padded to n_fft.
template <typename Derived>
RealMatrix<typename Derived::Scalar> magnitude_spectrogram(
    const Eigen::MatrixBase<Derived>& signal, const AudioConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  if (signal.size() == 0) throw AudioError("empty waveform");
  Signal<Scalar> window = Signal<Scalar>::Zero(cfg.n_fft);
  window.segment((cfg.n_fft - cfg.win_length) / 2, cfg.win_length) =
      hann_window<Scalar>(cfg.win_length);
  const Signal<Scalar> padded = reflect_pad(signal, cfg.n_fft / 2);
  return stft_frames(padded, cfg.n_fft, cfg.hop_length, window).cwiseAbs();
}

inline double hz_to_mel(double hz) {
  constexpr double f_sp = 200.0 / 3.0;
  constexpr double min_log_hz = 1000.0;
  const double min_log_mel = min_log_hz / f_sp;
  const double logstep = std::log(6.4) / 27.0;
  if (hz < min_log_hz) return hz / f_sp;
  return min_log_mel + std::log(hz / min_log_hz) / logstep;
}

inline double mel_to_hz(double mel) {
  constexpr double f_sp = 200.0 / 3.0;
  constexpr double min_log_hz = 1000.0;
  const double min_log_mel = min_log_hz / f_sp;
  const double logstep = std::log(6.4) / 27.0;
  if (mel < min_log_mel) return mel * f_sp;
  return min_log_hz * std::exp(logstep * (mel - min_log_mel));
}

// Band edges in Hz: n_mels + 2 points equally spaced on the mel scale.
inline std::vector<double> mel_band_edges(const AudioConfig& cfg) {
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_mels + 2));
  const double lo = hz_to_mel(cfg.fmin);
  const double hi = hz_to_mel(cfg.fmax);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(cfg.n_mels + 1));
  }
  return edges;
}

// Triangular, area-normalised filterbank, (n_mels x n_fft/2+1).
template <typename Scalar>
RealMatrix<Scalar> mel_filterbank(const AudioConfig& cfg) {
  const int bins = cfg.n_fft / 2 + 1;
  const auto edges = mel_band_edges(cfg);
  RealMatrix<Scalar> fb = RealMatrix<Scalar>::Zero(cfg.n_mels, bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[static_cast<std::size_t>(m)];
    const double center = edges[static_cast<std::size_t>(m) + 1];
    const double right = edges[static_cast<std::size_t>(m) + 2];
    const double enorm = 2.0 / (right - left);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
      const double lower = (f - left) / (center - left);
      const double upper = (right - f) / (right - center);
      const double w = std::max(0.0, std::min(lower, upper));
      fb(m, k) = static_cast<Scalar>(w * enorm);
    }
  }
  return fb;
}

}  // namespace emotts::dsp
