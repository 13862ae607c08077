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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "emotts/emoclass/classifier.h"
#include "emotts/emotion.h"
#include "emotts/pipeline/bundle.h"
#include "emotts/waveform.h"

namespace emotts::pipeline {

// Manual id or automatic selection by the text classifier.
struct EmotionChoice {
  bool automatic = false;
  int id = 3;

  static EmotionChoice manual(int id) { return {false, id}; }
  static EmotionChoice detect() { return {true, 3}; }
  // "auto" or one of the five emotion names; throws UnknownEmotion.
  static EmotionChoice parse(std::string_view text);
};

struct SynthesisRequest {
  std::string text;
  std::string speaker;
  EmotionChoice emotion;
  std::uint64_t seed = 0;
  double duration_scale = 1.0;
  // Optional per-phoneme frame counts replacing the predicted durations.
  std::vector<int> durations;
};

struct StageTimings {
  double frontend = 0.0;
  double classifier = 0.0;
  double acoustic = 0.0;
  double vocoder = 0.0;
  double total = 0.0;
};

struct SynthesisDiagnostics {
  EmotionLabel emotion;
  bool automatic = false;
  std::optional<emoclass::ClassifierOutput> classifier;
  std::string normalized_text;
  int word_count = 0;
  std::vector<std::string> phonemes;
  std::vector<std::string> oov_words;
  Eigen::VectorXd log_durations;
  Eigen::VectorXd pitch;
  Eigen::VectorXd energy;
  std::vector<int> durations;
  Eigen::MatrixXd mel;  // post-net output, frames x n_mels
  StageTimings timings;
};

struct SynthesisResult {
  Waveform waveform;
  SynthesisDiagnostics diagnostics;
};

// Text -> normalization -> G2P -> (classifier) -> acoustic model ->
// vocoder. Stateless per call and safe to use from several threads.
class Synthesizer {
 public:
  explicit Synthesizer(std::shared_ptr<const ModelBundle> bundle);

  const ModelBundle& bundle() const { return *bundle_; }

  // Throws UnknownSpeaker, UnknownEmotion, ModelNotLoaded (automatic mode
  // without a classifier) and SynthesisError when the text has nothing to
  // pronounce.
  SynthesisResult synthesize(const SynthesisRequest& request) const;

  // Mel spectrogram only; the vocoder is skipped.
  SynthesisDiagnostics analyze(const SynthesisRequest& request) const;

 private:
  std::shared_ptr<const ModelBundle> bundle_;
};

}  // namespace emotts::pipeline
