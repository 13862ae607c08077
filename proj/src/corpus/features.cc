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

#include "emotts/corpus/features.h"

#include <cmath>

#include "emotts/dsp/spectral.h"
#include "emotts/errors.h"

namespace emotts::corpus {

namespace {

long boundary_frame(double seconds, int sample_rate, int hop_length) {
  return std::lround(seconds * sample_rate / hop_length);
}

}  // namespace

std::vector<int> boundaries_to_frame_durations(const std::vector<double>& boundaries,
                                               int sample_rate, int hop_length) {
  if (sample_rate <= 0 || hop_length <= 0) {
    throw ConfigError("sample_rate and hop_length must be positive");
  }
  std::vector<int> durations;
  if (boundaries.size() < 2) return durations;
  durations.reserve(boundaries.size() - 1);
  long previous = boundary_frame(boundaries.front(), sample_rate, hop_length);
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    const long current = boundary_frame(boundaries[i], sample_rate, hop_length);
    durations.push_back(static_cast<int>(std::max(0L, current - previous)));
    previous = std::max(previous, current);
  }
  return durations;
}

std::vector<int> intervals_to_frame_durations(const IntervalTier& tier, int sample_rate,
                                              int hop_length) {
  if (sample_rate <= 0 || hop_length <= 0) {
    throw ConfigError("sample_rate and hop_length must be positive");
  }
  std::vector<int> durations;
  durations.reserve(tier.intervals.size());
  for (const auto& iv : tier.intervals) {
    const long lo = boundary_frame(iv.xmin, sample_rate, hop_length);
    const long hi = boundary_frame(iv.xmax, sample_rate, hop_length);
    durations.push_back(static_cast<int>(std::max(0L, hi - lo)));
  }
  return durations;
}

MelSpectrogram extract_mel(const Eigen::VectorXd& waveform, const dsp::AudioConfig& cfg) {
  const Eigen::MatrixXd mag = dsp::magnitude_spectrogram(waveform, cfg);
  const Eigen::MatrixXd fb = dsp::mel_filterbank<double>(cfg);
  MelSpectrogram mel;
  mel.sample_rate = cfg.sample_rate;
  mel.hop_length = cfg.hop_length;
  mel.values = (mag * fb.transpose()).cwiseMax(cfg.log_floor).array().log().matrix();
  return mel;
}

Eigen::VectorXd extract_energy(const Eigen::VectorXd& waveform, const dsp::AudioConfig& cfg) {
  return dsp::magnitude_spectrogram(waveform, cfg).rowwise().norm();
}

Eigen::VectorXd extract_pitch(const Eigen::VectorXd& waveform, const dsp::AudioConfig& cfg) {
  if (waveform.size() == 0) throw AudioError("empty waveform");
  const int n = cfg.win_length;
  const Eigen::Index frames = dsp::centered_frame_count(waveform.size(), cfg.hop_length);
  const Eigen::VectorXd padded = dsp::reflect_pad(waveform, cfg.n_fft / 2);
  const int offset = (cfg.n_fft - n) / 2;

  const int lag_lo = std::max(2, static_cast<int>(std::floor(cfg.sample_rate / cfg.pitch_fmax)));
  const int lag_hi = std::min(n - 2, static_cast<int>(std::ceil(cfg.sample_rate / cfg.pitch_fmin)));
  int fft_size = 1;
  while (fft_size < 2 * n) fft_size *= 2;
  dsp::RealFft<double> fft(fft_size);

  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(frames);
  Eigen::VectorXd buf = Eigen::VectorXd::Zero(fft_size);
  Eigen::VectorXd prefix(n + 1);
  std::vector<double> nr(static_cast<std::size_t>(lag_hi + 2), 0.0);
  for (Eigen::Index f = 0; f < frames; ++f) {
    Eigen::VectorXd frame = padded.segment(f * cfg.hop_length + offset, n);
    frame.array() -= frame.mean();
    const double e0 = frame.squaredNorm();
    if (e0 < 1e-10 * n) continue;

    buf.setZero();
    buf.head(n) = frame;
    Eigen::Matrix<std::complex<double>, 1, Eigen::Dynamic> spec = fft.forward(buf);
    spec = spec.cwiseAbs2().cast<std::complex<double>>();
    const Eigen::VectorXd r = fft.inverse(spec);

    prefix(0) = 0.0;
    for (int i = 0; i < n; ++i) prefix(i + 1) = prefix(i) + frame(i) * frame(i);
    double best = -1.0;
    for (int lag = lag_lo - 1; lag <= lag_hi + 1; ++lag) {
      // Energies of the overlapping head [0, n-lag) and tail [lag, n).
      const double head = prefix(n - lag);
      const double tail = prefix(n) - prefix(lag);
      const double denom = std::sqrt(head * tail);
      const double v = denom > 0.0 ? r(lag) / denom : 0.0;
      nr[static_cast<std::size_t>(lag)] = v;
      if (lag >= lag_lo && lag <= lag_hi) best = std::max(best, v);
    }
    if (best < cfg.voicing_threshold) continue;
    for (int lag = lag_lo; lag <= lag_hi; ++lag) {
      const double v = nr[static_cast<std::size_t>(lag)];
      const double left = nr[static_cast<std::size_t>(lag - 1)];
      const double right = nr[static_cast<std::size_t>(lag + 1)];
      if (v < 0.9 * best || v <= left || v < right) continue;
      const double curvature = left - 2.0 * v + right;
      const double shift = curvature < 0.0 ? 0.5 * (left - right) / curvature : 0.0;
      f0(f) = cfg.sample_rate / (lag + shift);
      break;
    }
  }
  return f0;
}

Eigen::VectorXd interpolate_unvoiced(const Eigen::VectorXd& pitch) {
  Eigen::VectorXd out = pitch;
  const Eigen::Index n = pitch.size();
  Eigen::Index prev = -1;
  for (Eigen::Index i = 0; i <= n; ++i) {
    if (i < n && pitch(i) <= 0.0) continue;
    if (i == n && prev < 0) break;
    const Eigen::Index gap_start = prev + 1;
    for (Eigen::Index j = gap_start; j < i; ++j) {
      if (prev < 0) {
        out(j) = pitch(i);
      } else if (i == n) {
        out(j) = pitch(prev);
      } else {
        const double t = static_cast<double>(j - prev) / static_cast<double>(i - prev);
        out(j) = (1.0 - t) * pitch(prev) + t * pitch(i);
      }
    }
    prev = i;
  }
  return out;
}

Eigen::VectorXd phoneme_averages(const Eigen::VectorXd& frames,
                                 const std::vector<int>& durations) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(durations.size()));
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const int d = durations[i];
    if (d < 0 || pos + d > frames.size()) {
      throw ShapeError("durations exceed the frame count");
    }
    if (d > 0) out(static_cast<Eigen::Index>(i)) = frames.segment(pos, d).mean();
    pos += d;
  }
  return out;
}

}  // namespace emotts::corpus
