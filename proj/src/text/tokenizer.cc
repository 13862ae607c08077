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

#include "emotts/text/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "emotts/errors.h"
#include "emotts/text/normalizer.h"

namespace emotts::text {

TokenVocabulary::TokenVocabulary() : TokenVocabulary(std::vector<std::string>{}) {}

TokenVocabulary::TokenVocabulary(std::vector<std::string> tokens) {
  const std::vector<std::string> specials = {"<pad>", "<unk>", "<cls>", "<sep>"};
  if (tokens.size() < specials.size() ||
      !std::equal(specials.begin(), specials.end(), tokens.begin())) {
    tokens.insert(tokens.begin(), specials.begin(), specials.end());
  }
  tokens_ = std::move(tokens);
  for (int i = 0; i < size(); ++i) ids_.try_emplace(tokens_[static_cast<std::size_t>(i)], i);
}

TokenVocabulary TokenVocabulary::build(const std::vector<std::string>& texts,
                                       int min_count, int max_size) {
  std::map<std::string, int> counts;
  for (const auto& t : texts) {
    for (auto& tok : basic_tokenize(t)) ++counts[tok];
  }
  std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  for (const auto& [tok, n] : ranked) {
    if (n < min_count) continue;
    if (static_cast<int>(tokens.size()) + 4 >= max_size) break;
    tokens.push_back(tok);
  }
  return TokenVocabulary(std::move(tokens));
}

int TokenVocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& TokenVocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw IndexError("token id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::string> basic_tokenize(std::string_view text) {
  const std::string ascii = transliterate_ascii(text);
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(current);
    current.clear();
  };
  for (char c : ascii) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u) || u < 0x20) {
      flush();
    } else if (std::ispunct(u)) {
      flush();
      out.emplace_back(1, c);
    } else {
      current += static_cast<char>(std::tolower(u));
    }
  }
  flush();
  return out;
}

int TokenSequence::length() const {
  return std::accumulate(attention_mask.begin(), attention_mask.end(), 0);
}

TokenSequence tokenize_for_classifier(std::string_view text, const TokenVocabulary& vocab) {
  constexpr int kLen = kClassifierSequenceLength;
  TokenSequence seq;
  seq.ids.assign(kLen, TokenVocabulary::kPad);
  seq.attention_mask.assign(kLen, 0);
  const auto words = basic_tokenize(text);
  const int body = std::min<int>(static_cast<int>(words.size()), kLen - 2);
  seq.ids[0] = TokenVocabulary::kCls;
  for (int i = 0; i < body; ++i) {
    seq.ids[static_cast<std::size_t>(i + 1)] = vocab.id(words[static_cast<std::size_t>(i)]);
  }
  seq.ids[static_cast<std::size_t>(body + 1)] = TokenVocabulary::kSep;
  std::fill(seq.attention_mask.begin(), seq.attention_mask.begin() + body + 2, 1);
  return seq;
}

}  // namespace emotts::text
