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

#include <json.hpp>

namespace emotts::dsp {

// Feature-extraction contract shared by corpus ingestion, the acoustic-model
// targets and both vocoders.
struct AudioConfig {
  int sample_rate = 22050;
  int n_fft = 1024;
  int win_length = 1024;
  int hop_length = 256;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  // Amplitude clamp applied before the natural log.
  double log_floor = 1e-5;

  // Autocorrelation pitch tracker.
  double pitch_fmin = 60.0;
  double pitch_fmax = 400.0;
  double voicing_threshold = 0.3;

  bool operator==(const AudioConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AudioConfig, sample_rate, n_fft,
                                                win_length, hop_length, n_mels,
                                                fmin, fmax, log_floor,
                                                pitch_fmin, pitch_fmax,
                                                voicing_threshold)

}  // namespace emotts::dsp
