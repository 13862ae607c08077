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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emotts::text {

// Lowercase ASCII with abbreviations and numerals written out and whitespace
// collapsed to single spaces. Produced by normalize_text.
struct NormalizedText {
  std::string text;

  bool empty() const { return text.empty(); }
  bool operator==(const NormalizedText&) const = default;
};

// Abbreviation -> expansion, matched case-insensitively at word boundaries.
// Keys include their trailing period ("dr.").
class AbbreviationTable {
 public:
  AbbreviationTable() = default;
  explicit AbbreviationTable(std::vector<std::pair<std::string, std::string>> entries);

  // Built-in table (dr., st., mr., mrs., etc. and a few more).
  static const AbbreviationTable& standard();
  // Two-column UTF-8 TSV: abbreviation<TAB>expansion. '#' starts a comment.
  static AbbreviationTable load_tsv(const std::filesystem::path& path);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// English words for 0 <= n <= 999'999 ("one hundred twenty three").
std::string number_to_words(std::int64_t n);

// Maps UTF-8 input to ASCII, folding common accented Latin letters and
// typographic punctuation; other code points are dropped.
std::string transliterate_ascii(std::string_view utf8);

NormalizedText normalize_text(
    std::string_view raw,
    const AbbreviationTable& abbreviations = AbbreviationTable::standard());

}  // namespace emotts::text
