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

// Griffin-Lim phase recovery from a log-mel spectrogram. The mel magnitudes
// are mapped back to linear frequency through the pseudo-inverse of the mel
// filterbank, then alternating projections between the target magnitude and
// consistent STFTs recover a phase. Templated on the real scalar type.

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "emotts/dsp/audio_config.h"
#include "emotts/dsp/spectral.h"

namespace emotts::vocoder {

struct GriffinLimOptions {
  int iterations = 32;
  std::uint64_t seed = 0;  // initial phase
};

// (frames x bins) linear magnitudes from (frames x n_mels) natural-log mels.
template <typename Scalar>
dsp::RealMatrix<Scalar> mel_to_linear(const dsp::RealMatrix<Scalar>& log_mel,
                                      const dsp::AudioConfig& cfg) {
  const dsp::RealMatrix<Scalar> fb = dsp::mel_filterbank<Scalar>(cfg);
  const dsp::RealMatrix<Scalar> pinv =
      Eigen::CompleteOrthogonalDecomposition<dsp::RealMatrix<Scalar>>(fb).pseudoInverse();
  const dsp::RealMatrix<Scalar> mel = log_mel.array().exp().matrix();
  return (mel * pinv.transpose()).cwiseMax(Scalar(0));
}

// ||  |STFT(x)| - S  ||_F / ||S||_F
template <typename Scalar>
Scalar spectral_convergence(const dsp::RealMatrix<Scalar>& estimate,
                            const dsp::RealMatrix<Scalar>& target) {
  const Scalar denom = target.norm();
  return denom > Scalar(0) ? (estimate - target).norm() / denom : estimate.norm();
}

// Recovers a waveform of exactly frames * hop_length samples whose centered
// STFT magnitude approximates `magnitude`. When `convergence` is given it
// receives the spectral convergence before the first and after every
// iteration (iterations + 1 values).
template <typename Scalar>
dsp::Signal<Scalar> griffin_lim_magnitude(const dsp::RealMatrix<Scalar>& magnitude,
                                          const dsp::AudioConfig& cfg,
                                          const GriffinLimOptions& options = {},
                                          std::vector<Scalar>* convergence = nullptr) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index frames = magnitude.rows();
  const Eigen::Index out_len = frames * cfg.hop_length;
  if (frames == 0) return dsp::Signal<Scalar>::Zero(0);

  dsp::Signal<Scalar> window = dsp::Signal<Scalar>::Zero(cfg.n_fft);
  window.segment((cfg.n_fft - cfg.win_length) / 2, cfg.win_length) =
      dsp::hann_window<Scalar>(cfg.win_length);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  dsp::ComplexMatrix<Scalar> phase(frames, magnitude.cols());
  for (Eigen::Index i = 0; i < phase.size(); ++i) {
    phase.data()[i] = std::polar(Scalar(1), static_cast<Scalar>(angle(rng)));
  }

  auto project = [&](const dsp::ComplexMatrix<Scalar>& spec) {
    return dsp::stft_frames(dsp::istft_frames(spec, cfg.n_fft, cfg.hop_length, window),
                            cfg.n_fft, cfg.hop_length, window);
  };
  dsp::ComplexMatrix<Scalar> spec = magnitude.template cast<Complex>().cwiseProduct(phase);
  if (convergence != nullptr) {
    convergence->push_back(spectral_convergence<Scalar>(project(spec).cwiseAbs(), magnitude));
  }
  for (int it = 0; it < options.iterations; ++it) {
    const dsp::ComplexMatrix<Scalar> rebuilt = project(spec);
    for (Eigen::Index i = 0; i < spec.size(); ++i) {
      const Scalar a = std::abs(rebuilt.data()[i]);
      const Complex unit = a > Scalar(1e-12) ? rebuilt.data()[i] / a : Complex(1, 0);
      spec.data()[i] = magnitude.data()[i] * unit;
    }
    if (convergence != nullptr) {
      convergence->push_back(spectral_convergence<Scalar>(project(spec).cwiseAbs(), magnitude));
    }
  }

  // Undo the centered padding of n_fft / 2 samples.
  const dsp::Signal<Scalar> padded = dsp::istft_frames(spec, cfg.n_fft, cfg.hop_length, window);
  dsp::Signal<Scalar> out = dsp::Signal<Scalar>::Zero(out_len);
  const Eigen::Index avail = std::min<Eigen::Index>(out_len, padded.size() - cfg.n_fft / 2);
  if (avail > 0) out.head(avail) = padded.segment(cfg.n_fft / 2, avail);
  return out;
}

template <typename Scalar>
dsp::Signal<Scalar> griffin_lim(const dsp::RealMatrix<Scalar>& log_mel, const dsp::AudioConfig& cfg,
                                const GriffinLimOptions& options = {},
                                std::vector<Scalar>* convergence = nullptr) {
  if (log_mel.cols() != cfg.n_mels) {
    throw ShapeError("griffin_lim: mel has " + std::to_string(log_mel.cols()) +
                     " bins, config expects " + std::to_string(cfg.n_mels));
  }
  const dsp::Signal<Scalar> x =
      griffin_lim_magnitude<Scalar>(mel_to_linear<Scalar>(log_mel, cfg), cfg, options, convergence);
  return x.cwiseMax(Scalar(-1)).cwiseMin(Scalar(1));
}

}  // namespace emotts::vocoder
