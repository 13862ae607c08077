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

#include "emotts/pipeline/bundle.h"

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"

#ifndef EMOTTS_DEFAULT_DATA_DIR
#define EMOTTS_DEFAULT_DATA_DIR "data"
#endif

namespace emotts::pipeline {

namespace {

namespace fs = std::filesystem;

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

fs::path if_exists(const fs::path& p) { return fs::exists(p) ? p : fs::path{}; }

}  // namespace

std::string ModelBundle::gender(const std::string& speaker) const {
  auto it = genders.find(speaker);
  return it == genders.end() ? "unknown" : it->second;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("EMOTTS_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return EMOTTS_DEFAULT_DATA_DIR;
}

std::vector<std::filesystem::path> default_lexicons() {
  const fs::path dir = default_data_dir() / "cmudict";
  return {dir / "weak_forms.dict", dir / "cmudict.dict"};
}

BundlePaths BundlePaths::from_directory(const std::filesystem::path& dir,
                                        const std::string& vocoder_kind) {
  BundlePaths p;
  p.acoustic = dir / "acoustic.ckpt";
  p.speakers = dir / "speakers.json";
  p.emotions = if_exists(dir / "emotions.json");
  p.classifier = if_exists(dir / "classifier.ckpt");
  p.vocoder = dir / "vocoder.ckpt";
  p.genders = if_exists(dir / "speaker_genders.json");
  p.audio = if_exists(dir / "audio.json");
  if (fs::exists(dir / "lexicon.txt")) {
    p.lexicons = {dir / "lexicon.txt"};
  } else {
    p.lexicons = default_lexicons();
  }
  p.vocoder_kind = vocoder_kind;
  return p;
}

std::shared_ptr<const ModelBundle> load_bundle(const BundlePaths& paths) {
  auto bundle = std::make_shared<ModelBundle>();
  if (!paths.audio.empty()) bundle->audio = read_json(paths.audio).get<dsp::AudioConfig>();

  bundle->acoustic = acoustic::load_acoustic(paths.acoustic);
  const auto& cfg = bundle->acoustic->config();
  if (cfg.n_mels != bundle->audio.n_mels) {
    throw ConfigError("acoustic model predicts " + std::to_string(cfg.n_mels) +
                      " mel bands but the audio config has " +
                      std::to_string(bundle->audio.n_mels));
  }

  bundle->speakers = acoustic::SpeakerTable::load(paths.speakers);
  if (bundle->speakers.size() > cfg.n_speakers) {
    throw ConfigError("speakers.json lists " + std::to_string(bundle->speakers.size()) +
                      " speakers but the model has " + std::to_string(cfg.n_speakers));
  }
  if (!paths.emotions.empty()) verify_emotions_json(read_json(paths.emotions));
  if (!paths.genders.empty()) {
    bundle->genders = read_json(paths.genders).get<std::map<std::string, std::string>>();
  }
  if (!paths.classifier.empty()) bundle->classifier = emoclass::load_classifier(paths.classifier);
  bundle->vocoder = vocoder::make_vocoder(paths.vocoder_kind, bundle->audio, paths.vocoder);
  if (bundle->vocoder->sample_rate() != bundle->audio.sample_rate) {
    throw ConfigError("vocoder sample rate differs from the audio config");
  }
  bundle->lexicon = text::PronunciationLexicon::load(
      paths.lexicons.empty() ? default_lexicons() : paths.lexicons);
  return bundle;
}

void write_emotions_json(const std::filesystem::path& path) {
  io::write_text_atomic(path, emotions_json_text() + "\n");
}

void write_genders_json(const std::filesystem::path& path,
                        const std::map<std::string, std::string>& genders) {
  io::write_text_atomic(path, nlohmann::json(genders).dump(2) + "\n");
}

}  // namespace emotts::pipeline
