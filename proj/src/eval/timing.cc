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

#include "emotts/eval/timing.h"

#include <algorithm>
#include <chrono>

#include "emotts/errors.h"

namespace emotts::eval {

std::string to_string(EmotionMethod method) {
  return method == EmotionMethod::kManual ? "manual" : "classifier";
}

void to_json(nlohmann::json& j, const TimingResult& r) {
  j = {{"method", r.method},           {"speaker", r.speaker},
       {"gender", r.gender},           {"emotion", r.emotion},
       {"sample_id", r.sample_id},     {"wall_seconds", r.wall_seconds},
       {"word_count", r.word_count},   {"audio_seconds", r.audio_seconds},
       {"repeats", r.repeats}};
  if (r.audio_seconds > 0.0) j["rtf"] = r.rtf();
}

void from_json(const nlohmann::json& j, TimingResult& r) {
  const TimingResult defaults;
  r.method = j.value("method", defaults.method);
  r.speaker = j.value("speaker", defaults.speaker);
  r.gender = j.value("gender", defaults.gender);
  r.emotion = j.value("emotion", defaults.emotion);
  r.sample_id = j.value("sample_id", defaults.sample_id);
  r.wall_seconds = j.value("wall_seconds", defaults.wall_seconds);
  r.word_count = j.value("word_count", defaults.word_count);
  r.audio_seconds = j.value("audio_seconds", defaults.audio_seconds);
  r.repeats = j.value("repeats", defaults.repeats);
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("median of an empty sample set");
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return 0.5 * (samples[mid - 1] + samples[mid]);
}

double monotonic_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

RepeatedTiming time_repeated(const std::function<Waveform()>& synthesize, int repeats,
                             const std::function<double()>& clock) {
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  RepeatedTiming out;
  out.last = synthesize();  // warm-up, untimed
  for (int i = 0; i < repeats; ++i) {
    const double start = clock();
    out.last = synthesize();
    out.seconds.push_back(clock() - start);
  }
  if (out.last.samples.size() == 0) throw SynthesisError("synthesis produced no audio");
  out.median_seconds = median(out.seconds);
  return out;
}

}  // namespace emotts::eval
