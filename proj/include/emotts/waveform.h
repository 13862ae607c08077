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

namespace emotts {

// Mono audio. Samples are nominally in [-1, 1].
struct Waveform {
  Eigen::VectorXd samples;
  int sample_rate = 22050;

  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

}  // namespace emotts
