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

#include "emotts/acoustic/speakers.h"

#include <algorithm>

#include <json.hpp>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"

namespace emotts::acoustic {

SpeakerTable::SpeakerTable(std::vector<std::string> names) : names_(std::move(names)) {
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("speaker table has duplicate names");
  }
}

SpeakerTable SpeakerTable::from_names(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return SpeakerTable(std::move(names));
}

int SpeakerTable::id(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    std::string known;
    for (const auto& n : names_) known += (known.empty() ? "" : ", ") + n;
    throw UnknownSpeaker("unknown speaker '" + name + "' (known: " + known + ")");
  }
  return static_cast<int>(it - names_.begin());
}

const std::string& SpeakerTable::name(int id) const {
  if (id < 0 || id >= size()) throw UnknownSpeaker("speaker id " + std::to_string(id) + " out of range");
  return names_[static_cast<std::size_t>(id)];
}

bool SpeakerTable::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::string SpeakerTable::to_json_text() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (int i = 0; i < size(); ++i) j[names_[static_cast<std::size_t>(i)]] = i;
  return j.dump(2) + "\n";
}

SpeakerTable SpeakerTable::parse_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("speakers.json: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("speakers.json must be an object of name -> id");
  std::vector<std::string> names(j.size());
  std::vector<bool> seen(j.size(), false);
  for (const auto& [name, value] : j.items()) {
    if (!value.is_number_integer()) throw ConfigError("speakers.json: id of '" + name + "' is not an integer");
    const auto id = value.get<long long>();
    if (id < 0 || id >= static_cast<long long>(names.size()) || seen[static_cast<std::size_t>(id)]) {
      throw ConfigError("speakers.json: ids must be exactly 0.." + std::to_string(names.size() - 1));
    }
    seen[static_cast<std::size_t>(id)] = true;
    names[static_cast<std::size_t>(id)] = name;
  }
  return SpeakerTable(std::move(names));
}

void SpeakerTable::save(const std::filesystem::path& path) const {
  io::write_text_atomic(path, to_json_text());
}

SpeakerTable SpeakerTable::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingAsset("speaker table not found: " + path.string());
  return parse_json_text(io::read_text(path));
}

}  // namespace emotts::acoustic
