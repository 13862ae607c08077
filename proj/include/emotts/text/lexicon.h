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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emotts/text/normalizer.h"
#include "emotts/text/phonemes.h"

namespace emotts::text {

// CMU-dictionary style word -> ARPAbet map. Only the first pronunciation of
// a word is kept; "WORD(2)" style alternates are skipped.
class PronunciationLexicon {
 public:
  PronunciationLexicon() = default;

  // Throws LexiconMissing if the file is absent, unreadable, or holds a
  // line that does not parse.
  static PronunciationLexicon load(const std::filesystem::path& path);
  static PronunciationLexicon parse(std::string_view content);
  // Loads several files; entries from earlier files take precedence.
  static PronunciationLexicon load(const std::vector<std::filesystem::path>& paths);

  void add(std::string word, std::vector<std::string> phonemes);
  const std::vector<std::string>* lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> entries_;
};

// Per-letter phoneme fallback for out-of-vocabulary words.
std::vector<std::string> letter_pronunciation(std::string_view word);

// Splits normalised text into lexicon words: runs of letters and inner
// apostrophes. Other characters separate words.
std::vector<std::string> split_words(std::string_view normalized);

PhonemeSequence g2p(const NormalizedText& norm, const PronunciationLexicon& lexicon);

}  // namespace emotts::text
