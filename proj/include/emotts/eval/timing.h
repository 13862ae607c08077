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

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "emotts/waveform.h"

namespace emotts::eval {

// How the emotion was chosen for a timed synthesis.
enum class EmotionMethod { kManual, kClassifier };

std::string to_string(EmotionMethod method);
NLOHMANN_JSON_SERIALIZE_ENUM(EmotionMethod, {{EmotionMethod::kManual, "manual"},
                                             {EmotionMethod::kClassifier, "classifier"}})

struct TimingResult {
  EmotionMethod method = EmotionMethod::kManual;
  std::string speaker;
  std::string gender;
  std::string emotion;
  std::string sample_id;
  double wall_seconds = 0.0;
  int word_count = 0;
  double audio_seconds = 0.0;
  int repeats = 1;

  // Seconds of compute per second of produced audio.
  double rtf() const { return wall_seconds / audio_seconds; }
};

void to_json(nlohmann::json& j, const TimingResult& r);
void from_json(const nlohmann::json& j, TimingResult& r);

// Middle element of the sorted samples; the mean of the two middle elements
// for an even count. Throws ConfigError on an empty input.
double median(std::vector<double> samples);

// Monotonic wall clock in seconds.
double monotonic_seconds();

struct RepeatedTiming {
  std::vector<double> seconds;  // one per timed repeat, in run order
  double median_seconds = 0.0;
  Waveform last;                // output of the final repeat
};

// Runs `synthesize` once untimed (warm-up), then `repeats` timed times in
// sequence. `clock` is injectable for tests. Throws ConfigError if
// repeats < 1 and SynthesisError if the output is empty.
RepeatedTiming time_repeated(const std::function<Waveform()>& synthesize, int repeats,
                             const std::function<double()>& clock = monotonic_seconds);

}  // namespace emotts::eval
