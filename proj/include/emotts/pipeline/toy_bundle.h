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
#include <filesystem>
#include <map>
#include <string>

namespace emotts::pipeline {

struct ToyBundleOptions {
  int utterances = 8;
  // 0 leaves the acoustic model at its seeded initialization.
  long acoustic_steps = 200;
  int acoustic_hidden = 16;
  // 0 skips the classifier checkpoint.
  int classifier_epochs = 30;
  std::uint64_t seed = 0;
};

// Genders of the four toy speakers.
const std::map<std::string, std::string>& toy_speaker_genders();

// Generates the synthetic corpus under <dir>/corpus, trains a tiny acoustic
// model and classifier on it, and writes a loadable model directory
// (see BundlePaths::from_directory) into `dir`. Pronunciations come from
// the bundled dictionary so arbitrary English text can be synthesized.
void build_toy_bundle(const std::filesystem::path& dir, const ToyBundleOptions& options = {});

}  // namespace emotts::pipeline
