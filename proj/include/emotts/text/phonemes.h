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

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emotts::text {

// Fixed phoneme inventory: PAD=0, UNK=1, SIL=2, then ARPAbet vowels with and
// without stress digits, then consonants. Ids are stable across builds.
class PhonemeVocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kSil = 2;

  static const PhonemeVocabulary& instance();

  int size() const { return static_cast<int>(symbols_.size()); }
  bool contains(std::string_view symbol) const;
  // Id for a symbol; unknown symbols map to kUnk.
  int id(std::string_view symbol) const;
  std::optional<int> find(std::string_view symbol) const;
  const std::string& symbol(int id) const;

  std::vector<int> encode(const std::vector<std::string>& symbols) const;
  std::vector<std::string> decode(const std::vector<int>& ids) const;

 private:
  PhonemeVocabulary();
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> ids_;
};

// Aligner silence labels ("", sil, sp, spn) all denote SIL.
bool is_silence_label(std::string_view label);

struct PhonemeSequence {
  std::vector<std::string> phonemes;
  std::string source_text;
  // Words pronounced through the letter fallback, in input order.
  std::vector<std::string> oov_words;

  std::size_t size() const { return phonemes.size(); }
  bool empty() const { return phonemes.empty(); }
};

}  // namespace emotts::text
