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

#include "emotts/emotion.h"

#include "emotts/errors.h"

namespace emotts {

EmotionLabel EmotionLabel::from_id(int id) {
  if (id < 0 || id >= kNumEmotions) {
    throw UnknownEmotion("emotion id " + std::to_string(id) + " is outside 0-4");
  }
  return EmotionLabel{id};
}

std::optional<EmotionLabel> EmotionLabel::find(std::string_view name) {
  for (int i = 0; i < kNumEmotions; ++i) {
    if (kEmotionNames[static_cast<std::size_t>(i)] == name) return EmotionLabel{i};
  }
  return std::nullopt;
}

EmotionLabel EmotionLabel::from_name(std::string_view name) {
  if (auto label = find(name)) return *label;
  throw UnknownEmotion("unknown emotion '" + std::string(name) + "'");
}

std::string emotions_json_text() {
  std::string out = "{";
  for (int i = 0; i < kNumEmotions; ++i) {
    if (i > 0) out += ", ";
    out += "\"" + std::string(kEmotionNames[static_cast<std::size_t>(i)]) + "\": " +
           std::to_string(i);
  }
  return out + "}";
}

void verify_emotions_json(const nlohmann::json& table) {
  if (!table.is_object() || table.size() != kNumEmotions) {
    throw ConfigError("emotions table must map exactly five labels");
  }
  for (int i = 0; i < kNumEmotions; ++i) {
    const std::string name(kEmotionNames[static_cast<std::size_t>(i)]);
    if (!table.contains(name) || !table[name].is_number_integer() || table[name].get<int>() != i) {
      throw ConfigError("emotions table must map '" + name + "' to " + std::to_string(i));
    }
  }
}

}  // namespace emotts
