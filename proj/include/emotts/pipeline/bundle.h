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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "emotts/acoustic/model.h"
#include "emotts/acoustic/speakers.h"
#include "emotts/dsp/audio_config.h"
#include "emotts/emoclass/classifier.h"
#include "emotts/text/lexicon.h"
#include "emotts/text/normalizer.h"
#include "emotts/vocoder/vocoder.h"

namespace emotts::pipeline {

// Everything the synthesizer needs, loaded once and never mutated.
struct ModelBundle {
  std::shared_ptr<const acoustic::AcousticModel> acoustic;
  acoustic::SpeakerTable speakers;
  // Speaker name -> "female" / "male"; speakers without an entry are unlisted.
  std::map<std::string, std::string> genders;
  // Optional; automatic emotion selection needs it.
  std::shared_ptr<const emoclass::EmotionClassifier> classifier;
  std::shared_ptr<const vocoder::Vocoder> vocoder;
  text::PronunciationLexicon lexicon;
  text::AbbreviationTable abbreviations = text::AbbreviationTable::standard();
  dsp::AudioConfig audio;

  std::string gender(const std::string& speaker) const;
};

struct BundlePaths {
  std::filesystem::path acoustic;    // required
  std::filesystem::path speakers;    // required, {"name": id}
  std::filesystem::path emotions;    // optional; verified against the fixed table
  std::filesystem::path classifier;  // optional
  std::filesystem::path vocoder;     // required when vocoder_kind == "neural"
  std::filesystem::path genders;     // optional, {"name": "female" | "male"}
  std::filesystem::path audio;       // optional AudioConfig JSON
  std::vector<std::filesystem::path> lexicons;  // earlier files take precedence
  std::string vocoder_kind = "griffin_lim";

  // Conventional names inside a model directory: acoustic.ckpt,
  // speakers.json, emotions.json, classifier.ckpt, vocoder.ckpt,
  // speaker_genders.json, audio.json and lexicon.txt. Optional files are
  // only referenced when present; without lexicon.txt the bundled CMU
  // dictionary is used.
  static BundlePaths from_directory(const std::filesystem::path& dir,
                                    const std::string& vocoder_kind = "griffin_lim");
};

// Directory holding the shipped lexicons (data/ in the source tree).
std::filesystem::path default_data_dir();
// Weak forms, then the CMU dictionary.
std::vector<std::filesystem::path> default_lexicons();

// Throws ModelNotLoaded / MissingAsset for absent required files and
// ConfigError when the pieces disagree (mel size, speaker count, emotion
// table).
std::shared_ptr<const ModelBundle> load_bundle(const BundlePaths& paths);

// Writes emotions.json next to a trained model.
void write_emotions_json(const std::filesystem::path& path);
void write_genders_json(const std::filesystem::path& path,
                        const std::map<std::string, std::string>& genders);

}  // namespace emotts::pipeline
