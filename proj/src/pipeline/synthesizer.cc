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

#include "emotts/pipeline/synthesizer.h"

#include "emotts/errors.h"
#include "emotts/eval/timing.h"
#include "emotts/nn/var.h"
#include "emotts/text/phonemes.h"

namespace emotts::pipeline {

EmotionChoice EmotionChoice::parse(std::string_view text) {
  if (text == "auto") return detect();
  if (const auto label = EmotionLabel::find(text)) return manual(label->id);
  std::string names;
  for (auto n : kEmotionNames) names += (names.empty() ? "" : ", ") + std::string(n);
  throw UnknownEmotion("unknown emotion '" + std::string(text) + "'; expected auto or one of: " +
                       names);
}

Synthesizer::Synthesizer(std::shared_ptr<const ModelBundle> bundle) : bundle_(std::move(bundle)) {
  if (bundle_ == nullptr || bundle_->acoustic == nullptr || bundle_->vocoder == nullptr) {
    throw ModelNotLoaded("synthesizer needs an acoustic model and a vocoder");
  }
}

SynthesisDiagnostics Synthesizer::analyze(const SynthesisRequest& request) const {
  const auto& b = *bundle_;
  const double start = eval::monotonic_seconds();
  SynthesisDiagnostics d;

  const int speaker = b.speakers.id(request.speaker);
  if (!request.emotion.automatic) d.emotion = EmotionLabel::from_id(request.emotion.id);

  const auto normalized = text::normalize_text(request.text, b.abbreviations);
  d.normalized_text = normalized.text;
  d.word_count = static_cast<int>(text::split_words(normalized.text).size());
  const auto seq = text::g2p(normalized, b.lexicon);
  if (seq.empty()) throw SynthesisError("text has nothing to pronounce after normalization");
  d.phonemes = seq.phonemes;
  d.oov_words = seq.oov_words;
  const double frontend_done = eval::monotonic_seconds();
  d.timings.frontend = frontend_done - start;

  if (request.emotion.automatic) {
    if (b.classifier == nullptr) {
      throw ModelNotLoaded("automatic emotion selection needs a classifier checkpoint");
    }
    d.classifier = b.classifier->classify_text(request.text);
    d.emotion = d.classifier->predicted;
    d.automatic = true;
  }
  const double classifier_done = eval::monotonic_seconds();
  d.timings.classifier = classifier_done - frontend_done;

  acoustic::AcousticInput input;
  input.phoneme_ids = text::PhonemeVocabulary::instance().encode(seq.phonemes);
  input.speaker = speaker;
  input.emotion = d.emotion.id;
  acoustic::InferenceControls controls;
  controls.duration_scale = request.duration_scale;
  controls.durations = request.durations;
  nn::NoGradGuard no_grad;
  const auto out = b.acoustic->forward(input, nullptr, nn::ForwardContext{}, controls);
  d.log_durations = out.variance.log_durations.value().col(0);
  d.pitch = out.variance.pitch.value().col(0);
  d.energy = out.variance.energy.value().col(0);
  d.durations = out.variance.durations;
  d.mel = out.mel_after.value();
  const double acoustic_done = eval::monotonic_seconds();
  d.timings.acoustic = acoustic_done - classifier_done;
  d.timings.total = acoustic_done - start;
  return d;
}

SynthesisResult Synthesizer::synthesize(const SynthesisRequest& request) const {
  const double start = eval::monotonic_seconds();
  SynthesisResult r;
  r.diagnostics = analyze(request);
  const double vocoder_start = eval::monotonic_seconds();
  r.waveform = bundle_->vocoder->synthesize(r.diagnostics.mel, request.seed);
  const double done = eval::monotonic_seconds();
  if (r.waveform.samples.size() == 0) throw SynthesisError("vocoder produced no audio");
  r.diagnostics.timings.vocoder = done - vocoder_start;
  r.diagnostics.timings.total = done - start;
  return r;
}

}  // namespace emotts::pipeline
