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
#include <string>

#include "emotts/pipeline/bundle.h"

namespace emotts::service {

// Service settings. File format: one "key = value" per line, '#' starts a
// comment, blank lines ignored. Keys:
//   host, port, model_dir, acoustic, classifier, vocoder, speakers,
//   genders, vocoder_kind (griffin_lim | neural), default_speaker,
//   max_text_length, workers, diagnostics (true | false)
// Relative paths are resolved against the config file's directory.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path model_dir;
  std::filesystem::path acoustic;
  std::filesystem::path classifier;
  std::filesystem::path vocoder;
  std::filesystem::path speakers;
  std::filesystem::path genders;
  std::string vocoder_kind = "griffin_lim";
  std::string default_speaker;
  int max_text_length = 500;
  // Concurrent synthesis cap; 0 picks the number of CPU cores.
  int workers = 0;
  // Enables POST /v1/mel.
  bool diagnostics = true;

  // Throws ConfigError naming the offending line or key.
  static ServiceConfig parse(const std::string& text,
                             const std::filesystem::path& base_dir = {});
  static ServiceConfig load(const std::filesystem::path& path);

  // EMOTTS_HOST and EMOTTS_PORT take precedence over file values.
  void apply_environment();
  void apply_environment(const std::map<std::string, std::string>& env);

  // Throws ConfigError unless every referenced checkpoint exists, the port
  // is valid and max_text_length >= 1.
  void validate() const;

  pipeline::BundlePaths bundle_paths() const;
  int worker_count() const;
};

}  // namespace emotts::service
