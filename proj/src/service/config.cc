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

#include "emotts/service/config.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"

namespace emotts::service {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw ConfigError(what + " not found: " + p.string());
}

}  // namespace

ServiceConfig ServiceConfig::parse(const std::string& text, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "host") {
      c.host = value;
    } else if (key == "port") {
      c.port = parse_int(key, value);
    } else if (key == "model_dir") {
      c.model_dir = resolve(base_dir, value);
    } else if (key == "acoustic") {
      c.acoustic = resolve(base_dir, value);
    } else if (key == "classifier") {
      c.classifier = resolve(base_dir, value);
    } else if (key == "vocoder") {
      c.vocoder = resolve(base_dir, value);
    } else if (key == "speakers") {
      c.speakers = resolve(base_dir, value);
    } else if (key == "genders") {
      c.genders = resolve(base_dir, value);
    } else if (key == "vocoder_kind") {
      c.vocoder_kind = value;
    } else if (key == "default_speaker") {
      c.default_speaker = value;
    } else if (key == "max_text_length") {
      c.max_text_length = parse_int(key, value);
    } else if (key == "workers") {
      c.workers = parse_int(key, value);
    } else if (key == "diagnostics") {
      c.diagnostics = parse_bool(key, value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  if (!fs::exists(path)) throw ConfigError("service config not found: " + path.string());
  return parse(io::read_text(path), path.parent_path());
}

void ServiceConfig::apply_environment() {
  std::map<std::string, std::string> env;
  for (const char* name : {"EMOTTS_HOST", "EMOTTS_PORT"}) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') env[name] = v;
  }
  apply_environment(env);
}

void ServiceConfig::apply_environment(const std::map<std::string, std::string>& env) {
  if (auto it = env.find("EMOTTS_HOST"); it != env.end()) host = it->second;
  if (auto it = env.find("EMOTTS_PORT"); it != env.end()) port = parse_int("EMOTTS_PORT", it->second);
}

pipeline::BundlePaths ServiceConfig::bundle_paths() const {
  auto p = model_dir.empty() ? pipeline::BundlePaths{}
                             : pipeline::BundlePaths::from_directory(model_dir, vocoder_kind);
  if (model_dir.empty()) p.lexicons = pipeline::default_lexicons();
  p.vocoder_kind = vocoder_kind;
  if (!acoustic.empty()) p.acoustic = acoustic;
  if (!classifier.empty()) p.classifier = classifier;
  if (!vocoder.empty()) p.vocoder = vocoder;
  if (!speakers.empty()) p.speakers = speakers;
  if (!genders.empty()) p.genders = genders;
  return p;
}

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw ConfigError("port out of range: " + std::to_string(port));
  if (max_text_length < 1) throw ConfigError("max_text_length must be at least 1");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (vocoder_kind != "griffin_lim" && vocoder_kind != "neural") {
    throw ConfigError("vocoder_kind must be griffin_lim or neural, got '" + vocoder_kind + "'");
  }
  const auto p = bundle_paths();
  require_file(p.acoustic, "acoustic checkpoint");
  require_file(p.speakers, "speaker table");
  if (!p.classifier.empty()) require_file(p.classifier, "classifier checkpoint");
  if (vocoder_kind == "neural") require_file(p.vocoder, "vocoder checkpoint");
}

int ServiceConfig::worker_count() const {
  if (workers > 0) return workers;
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace emotts::service
