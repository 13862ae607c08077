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

#include <string>
#include <vector>

#include "emotts/eval/report.h"
#include "emotts/eval/timing.h"
#include "emotts/pipeline/synthesizer.h"

namespace emotts::eval {

// Times the whole request path, text frontend and classifier included,
// model loading excluded: one untimed warm-up, then the median of
// `repeats` sequential runs.
TimingResult time_synthesis(const pipeline::Synthesizer& synthesizer,
                            const pipeline::SynthesisRequest& request, int repeats,
                            const std::string& sample_id = "");

struct BenchmarkCase {
  std::string sample_id;
  std::string text;
};

// Every (speaker, emotion, case) combination in manual mode, plus the
// classifier-mode row for each (speaker, case) when a classifier is
// loaded. Runs strictly one at a time.
std::vector<TimingResult> run_benchmark(const pipeline::Synthesizer& synthesizer,
                                        const std::vector<std::string>& speakers,
                                        const std::vector<std::string>& emotions,
                                        const std::vector<BenchmarkCase>& cases, int repeats);

// Aggregate RTF of a set of runs (total compute / total audio) as a
// one-row system table entry.
RtfRow summarize_rtf(const std::vector<TimingResult>& results, const std::string& system,
                     const std::string& vocoder, const HardwareInfo& hardware);

}  // namespace emotts::eval
