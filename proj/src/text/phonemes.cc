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

#include "emotts/text/phonemes.h"

#include <array>

#include "emotts/errors.h"

namespace emotts::text {

namespace {

constexpr std::array<std::string_view, 15> kVowels = {
    "AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER",
    "EY", "IH", "IY", "OW", "OY", "UH", "UW"};

constexpr std::array<std::string_view, 24> kConsonants = {
    "B",  "CH", "D", "DH", "F", "G", "HH", "JH", "K", "L", "M",  "N",
    "NG", "P",  "R", "S",  "SH", "T", "TH", "V", "W", "Y", "Z", "ZH"};

}  // namespace

PhonemeVocabulary::PhonemeVocabulary() {
  symbols_ = {"PAD", "UNK", "SIL"};
  for (auto v : kVowels) {
    symbols_.emplace_back(v);
    for (char stress : {'0', '1', '2'}) symbols_.push_back(std::string(v) + stress);
  }
  for (auto c : kConsonants) symbols_.emplace_back(c);
  for (int i = 0; i < size(); ++i) ids_[symbols_[static_cast<std::size_t>(i)]] = i;
}

const PhonemeVocabulary& PhonemeVocabulary::instance() {
  static const PhonemeVocabulary vocab;
  return vocab;
}

bool PhonemeVocabulary::contains(std::string_view symbol) const {
  return ids_.count(std::string(symbol)) != 0;
}

std::optional<int> PhonemeVocabulary::find(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int PhonemeVocabulary::id(std::string_view symbol) const {
  return find(symbol).value_or(kUnk);
}

const std::string& PhonemeVocabulary::symbol(int id) const {
  if (id < 0 || id >= size()) {
    throw IndexError("phoneme id " + std::to_string(id) + " out of range");
  }
  return symbols_[static_cast<std::size_t>(id)];
}

std::vector<int> PhonemeVocabulary::encode(
    const std::vector<std::string>& symbols) const {
  std::vector<int> ids;
  ids.reserve(symbols.size());
  for (const auto& s : symbols) ids.push_back(id(s));
  return ids;
}

std::vector<std::string> PhonemeVocabulary::decode(
    const std::vector<int>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(symbol(i));
  return out;
}

bool is_silence_label(std::string_view label) {
  return label.empty() || label == "sil" || label == "sp" || label == "spn" ||
         label == "SIL" || label == "<eps>";
}

}  // namespace emotts::text
