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

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emotts::text {

inline constexpr int kClassifierSequenceLength = 128;

// Word-level vocabulary for the classifier: PAD=0, UNK=1, CLS=2, SEP=3, then
// corpus words in descending frequency (ties broken alphabetically).
class TokenVocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;

  TokenVocabulary();
  explicit TokenVocabulary(std::vector<std::string> tokens);

  // Learns a vocabulary from raw texts, keeping tokens seen at least
  // `min_count` times, at most `max_size` entries including specials.
  static TokenVocabulary build(const std::vector<std::string>& texts,
                               int min_count = 1, int max_size = 30000);

  int size() const { return static_cast<int>(tokens_.size()); }
  int id(const std::string& token) const;
  const std::string& token(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Lowercases, splits on whitespace and isolates every punctuation character.
std::vector<std::string> basic_tokenize(std::string_view text);

struct TokenSequence {
  std::vector<int> ids;             // exactly kClassifierSequenceLength
  std::vector<int> attention_mask;  // 1-prefix over real tokens
  int length() const;               // number of unmasked positions
};

// [CLS] tokens... [SEP], truncated to fit, then padded with PAD.
TokenSequence tokenize_for_classifier(std::string_view text,
                                      const TokenVocabulary& vocab);

}  // namespace emotts::text
