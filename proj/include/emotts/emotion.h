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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace emotts {

inline constexpr int kNumEmotions = 5;

// The five emotion labels and their fixed ids. The table is the contract
// shared by the classifier output and the acoustic model's emotion table.
inline constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {
    "amused", "anger", "disgust", "neutral", "sleepiness"};

struct EmotionLabel {
  int id = 3;

  std::string_view name() const { return kEmotionNames[static_cast<std::size_t>(id)]; }
  bool operator==(const EmotionLabel&) const = default;

  // Throws UnknownEmotion for ids outside 0-4.
  static EmotionLabel from_id(int id);
  // Throws UnknownEmotion for names outside the table (case-sensitive).
  static EmotionLabel from_name(std::string_view name);
  static std::optional<EmotionLabel> find(std::string_view name);
};

// {"amused": 0, "anger": 1, "disgust": 2, "neutral": 3, "sleepiness": 4}
std::string emotions_json_text();
// Parses an emotions table and verifies it matches the fixed mapping.
void verify_emotions_json(const nlohmann::json& table);

}  // namespace emotts
