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

#include "emotts/text/lexicon.h"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "emotts/errors.h"

namespace emotts::text {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Letter sounds rather than letter names: unknown words are more often
// names or slang than acronyms.
constexpr std::array<std::string_view, 26> kLetterSounds = {
    "AE1", "B", "K", "D", "EH1", "F", "G", "HH", "IH1", "JH", "K", "L", "M",
    "N", "AA1", "P", "K", "R", "S", "T", "AH1", "V", "W", "K S", "Y", "Z"};

}  // namespace

PronunciationLexicon PronunciationLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconMissing("lexicon file not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const LexiconMissing& e) {
    throw LexiconMissing(path.string() + ": " + e.what());
  }
}

PronunciationLexicon PronunciationLexicon::load(const std::vector<std::filesystem::path>& paths) {
  PronunciationLexicon merged;
  for (const auto& path : paths) {
    for (auto& [word, phones] : load(path).entries_) merged.entries_.try_emplace(word, phones);
  }
  return merged;
}

PronunciationLexicon PronunciationLexicon::parse(std::string_view content) {
  const auto& vocab = PhonemeVocabulary::instance();
  PronunciationLexicon lex;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string line(content.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.rfind(";;;", 0) == 0) continue;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) {
      if (end == content.size()) break;
      continue;
    }
    std::vector<std::string> phones;
    for (std::string p; fields >> p;) {
      if (!vocab.contains(p)) {
        throw LexiconMissing("line " + std::to_string(line_no) + ": unknown phoneme '" + p + "'");
      }
      phones.push_back(p);
    }
    if (phones.empty()) {
      throw LexiconMissing("line " + std::to_string(line_no) + ": no pronunciation for '" + word + "'");
    }
    if (word.size() > 3 && word.back() == ')' && word[word.size() - 3] == '(') continue;
    lex.add(std::move(word), std::move(phones));
    if (end == content.size()) break;
  }
  return lex;
}

void PronunciationLexicon::add(std::string word, std::vector<std::string> phonemes) {
  entries_.try_emplace(lower(word), std::move(phonemes));
}

const std::vector<std::string>* PronunciationLexicon::lookup(std::string_view word) const {
  auto it = entries_.find(lower(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> letter_pronunciation(std::string_view word) {
  std::vector<std::string> out;
  for (char c : word) {
    const int lc = std::tolower(static_cast<unsigned char>(c));
    if (lc < 'a' || lc > 'z') continue;
    std::istringstream parts{std::string(kLetterSounds[static_cast<std::size_t>(lc - 'a')])};
    for (std::string p; parts >> p;) out.push_back(p);
  }
  return out;
}

std::vector<std::string> split_words(std::string_view normalized) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    while (!current.empty() && current.back() == '\'') current.pop_back();
    if (!current.empty()) words.push_back(current);
    current.clear();
  };
  for (char c : normalized) {
    const bool letter = std::isalpha(static_cast<unsigned char>(c)) != 0;
    if (letter || (c == '\'' && !current.empty())) {
      current += c;
    } else {
      flush();
    }
  }
  flush();
  return words;
}

PhonemeSequence g2p(const NormalizedText& norm, const PronunciationLexicon& lexicon) {
  PhonemeSequence seq;
  seq.source_text = norm.text;
  for (const auto& word : split_words(norm.text)) {
    const auto* pron = lexicon.lookup(word);
    if (pron == nullptr && word.find('\'') != std::string::npos) {
      std::string bare;
      for (char c : word) if (c != '\'') bare += c;
      pron = lexicon.lookup(bare);
    }
    if (pron != nullptr) {
      seq.phonemes.insert(seq.phonemes.end(), pron->begin(), pron->end());
    } else {
      const auto letters = letter_pronunciation(word);
      seq.phonemes.insert(seq.phonemes.end(), letters.begin(), letters.end());
      seq.oov_words.push_back(word);
    }
  }
  return seq;
}

}  // namespace emotts::text
