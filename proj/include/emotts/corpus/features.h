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

#include <vector>

#include <Eigen/Core>

#include "emotts/corpus/textgrid.h"
#include "emotts/dsp/audio_config.h"

namespace emotts::corpus {

// Log-amplitude mel spectrogram, (frames x n_mels).
struct MelSpectrogram {
  Eigen::MatrixXd values;
  int sample_rate = 22050;
  int hop_length = 256;

  Eigen::Index num_frames() const { return values.rows(); }
  Eigen::Index num_mels() const { return values.cols(); }
};

// Frame counts per interval, rounded at the boundaries so that the sum
// telescopes to round(last_xmax * sr / hop) - round(first_xmin * sr / hop).
std::vector<int> intervals_to_frame_durations(const IntervalTier& tier,
                                              int sample_rate, int hop_length);
// Same rule over explicit boundary times (n+1 boundaries -> n durations).
std::vector<int> boundaries_to_frame_durations(const std::vector<double>& boundaries,
                                               int sample_rate, int hop_length);

// log(max(mel, log_floor)) over a centered, reflect-padded STFT, giving
// 1 + len / hop frames. Throws AudioError on empty input.
MelSpectrogram extract_mel(const Eigen::VectorXd& waveform, const dsp::AudioConfig& cfg);

// Frame-wise normalised autocorrelation F0 in Hz (0 when unvoiced), on the
// same frame grid as extract_mel.
Eigen::VectorXd extract_pitch(const Eigen::VectorXd& waveform, const dsp::AudioConfig& cfg);

// L2 norm of each magnitude-spectrum frame.
Eigen::VectorXd extract_energy(const Eigen::VectorXd& waveform, const dsp::AudioConfig& cfg);

// Fills unvoiced (zero) frames by linear interpolation between voiced
// neighbours; edges hold the nearest voiced value. All-unvoiced stays zero.
Eigen::VectorXd interpolate_unvoiced(const Eigen::VectorXd& pitch);

// Mean of `frames` over each duration span; zero-length spans yield 0.
Eigen::VectorXd phoneme_averages(const Eigen::VectorXd& frames,
                                 const std::vector<int>& durations);

}  // namespace emotts::corpus
