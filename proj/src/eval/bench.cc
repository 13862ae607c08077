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

#include "emotts/eval/bench.h"

#include "emotts/errors.h"

namespace emotts::eval {

TimingResult time_synthesis(const pipeline::Synthesizer& synthesizer,
                            const pipeline::SynthesisRequest& request, int repeats,
                            const std::string& sample_id) {
  pipeline::SynthesisDiagnostics diagnostics;
  const auto timing = time_repeated(
      [&] {
        auto r = synthesizer.synthesize(request);
        diagnostics = std::move(r.diagnostics);
        return std::move(r.waveform);
      },
      repeats);
  TimingResult t;
  t.method = request.emotion.automatic ? EmotionMethod::kClassifier : EmotionMethod::kManual;
  t.speaker = request.speaker;
  t.gender = synthesizer.bundle().gender(request.speaker);
  t.emotion = std::string(diagnostics.emotion.name());
  t.sample_id = sample_id;
  t.wall_seconds = timing.median_seconds;
  t.word_count = diagnostics.word_count;
  t.audio_seconds = timing.last.seconds();
  t.repeats = repeats;
  return t;
}

std::vector<TimingResult> run_benchmark(const pipeline::Synthesizer& synthesizer,
                                        const std::vector<std::string>& speakers,
                                        const std::vector<std::string>& emotions,
                                        const std::vector<BenchmarkCase>& cases, int repeats) {
  std::vector<TimingResult> out;
  for (const auto& speaker : speakers) {
    for (const auto& c : cases) {
      for (const auto& emotion : emotions) {
        pipeline::SynthesisRequest req;
        req.text = c.text;
        req.speaker = speaker;
        req.emotion = pipeline::EmotionChoice::parse(emotion);
        out.push_back(time_synthesis(synthesizer, req, repeats, c.sample_id));
      }
      if (synthesizer.bundle().classifier != nullptr) {
        pipeline::SynthesisRequest req;
        req.text = c.text;
        req.speaker = speaker;
        req.emotion = pipeline::EmotionChoice::detect();
        out.push_back(time_synthesis(synthesizer, req, repeats, c.sample_id));
      }
    }
  }
  return out;
}

RtfRow summarize_rtf(const std::vector<TimingResult>& results, const std::string& system,
                     const std::string& vocoder, const HardwareInfo& hardware) {
  double wall = 0.0;
  double audio = 0.0;
  for (const auto& r : results) {
    wall += r.wall_seconds;
    audio += r.audio_seconds;
  }
  if (audio <= 0.0) throw ConfigError("no audio to compute a real-time factor from");
  return {system, vocoder, wall / audio, hardware.descriptor()};
}

}  // namespace emotts::eval
