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

#include "emotts/text/normalizer.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "emotts/errors.h"

namespace emotts::text {

namespace {

constexpr std::array<std::string_view, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};

constexpr std::array<std::string_view, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};

// Base letters for U+0100..U+017F (Latin Extended-A).
constexpr std::string_view kLatinExtA =
    "AaAaAaCcCcCcCcDdDdEeEeEeEeEeGgGgGgGgHhHhIiIiIiIiIiIiJjKkkLlLlLlLlLl"
    "NnNnNnnNnOoOoOoOoRrRrRrSsSsSsSsTtTtTtUuUuUuUuUuUuWwYyYZzZzZzs";
static_assert(kLatinExtA.size() == 128);

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string under_thousand(int n) {
  std::string out;
  if (n >= 100) {
    out += kOnes[static_cast<std::size_t>(n / 100)];
    out += " hundred";
    n %= 100;
    if (n == 0) return out;
    out += ' ';
  }
  if (n < 20) {
    out += kOnes[static_cast<std::size_t>(n)];
  } else {
    out += kTens[static_cast<std::size_t>(n / 10)];
    if (n % 10 != 0) {
      out += ' ';
      out += kOnes[static_cast<std::size_t>(n % 10)];
    }
  }
  return out;
}

std::string ordinalize(const std::string& cardinal) {
  const auto space = cardinal.rfind(' ');
  const std::string head = space == std::string::npos ? "" : cardinal.substr(0, space + 1);
  std::string last = space == std::string::npos ? cardinal : cardinal.substr(space + 1);
  static const std::array<std::pair<std::string_view, std::string_view>, 6> kIrregular = {{
      {"one", "first"}, {"two", "second"}, {"three", "third"},
      {"five", "fifth"}, {"eight", "eighth"}, {"nine", "ninth"}}};
  for (const auto& [from, to] : kIrregular) {
    if (last == from) return head + std::string(to);
  }
  if (last == "twelve") return head + "twelfth";
  if (!last.empty() && last.back() == 'y') {
    last.pop_back();
    return head + last + "ieth";
  }
  return head + last + "th";
}

std::string spell_digits(std::string_view digits) {
  std::string out;
  for (char c : digits) {
    if (!is_digit(c)) continue;
    if (!out.empty()) out += ' ';
    out += kOnes[static_cast<std::size_t>(c - '0')];
  }
  return out;
}

void append_utf8_fold(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
    return;
  }
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp == 0x152) { out += "OE"; return; }
    if (cp == 0x153) { out += "oe"; return; }
    out += kLatinExtA[cp - 0x100];
    return;
  }
  switch (cp) {
    case 0xC6: out += "AE"; return;
    case 0xE6: out += "ae"; return;
    case 0xDF: out += "ss"; return;
    case 0xDE: out += "TH"; return;
    case 0xFE: out += "th"; return;
    case 0xD7: out += 'x'; return;
    case 0xF7: out += '/'; return;
    case 0xC7: out += 'C'; return;
    case 0xE7: out += 'c'; return;
    case 0xD0: out += 'D'; return;
    case 0xF0: out += 'd'; return;
    case 0xD1: out += 'N'; return;
    case 0xF1: out += 'n'; return;
    case 0xD8: out += 'O'; return;
    case 0xF8: out += 'o'; return;
    case 0xDD: out += 'Y'; return;
    case 0xFD: case 0xFF: out += 'y'; return;
    case 0x2018: case 0x2019: case 0x201B: case 0x2032: out += '\''; return;
    case 0x201C: case 0x201D: case 0x201E: case 0x2033: out += '"'; return;
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2212:
      out += '-'; return;
    case 0x2026: out += "..."; return;
    case 0xA0: case 0x202F: case 0x3000: out += ' '; return;
    default: break;
  }
  if (cp >= 0x2000 && cp <= 0x200A) { out += ' '; return; }
  if (cp >= 0xC0 && cp <= 0xC5) { out += 'A'; return; }
  if (cp >= 0xE0 && cp <= 0xE5) { out += 'a'; return; }
  if (cp >= 0xC8 && cp <= 0xCB) { out += 'E'; return; }
  if (cp >= 0xE8 && cp <= 0xEB) { out += 'e'; return; }
  if (cp >= 0xCC && cp <= 0xCF) { out += 'I'; return; }
  if (cp >= 0xEC && cp <= 0xEF) { out += 'i'; return; }
  if (cp >= 0xD2 && cp <= 0xD6) { out += 'O'; return; }
  if (cp >= 0xF2 && cp <= 0xF6) { out += 'o'; return; }
  if (cp >= 0xD9 && cp <= 0xDC) { out += 'U'; return; }
  if (cp >= 0xF9 && cp <= 0xFC) { out += 'u'; return; }
  // Anything else has no ASCII rendering and is dropped.
}

// Digits (with optional thousands commas and a decimal part) become words.
std::string expand_numbers(const std::string& s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      out += s[i++];
      continue;
    }
    std::size_t j = i;
    std::string int_digits;
    while (j < s.size() && is_digit(s[j])) int_digits += s[j++];
    // Thousands separators: ",ddd" not followed by another digit.
    while (j + 3 < s.size() + 0 && s[j] == ',' && is_digit(s[j + 1]) &&
           is_digit(s[j + 2]) && is_digit(s[j + 3]) &&
           (j + 4 >= s.size() || !is_digit(s[j + 4]))) {
      int_digits += s.substr(j + 1, 3);
      j += 4;
    }
    std::string frac_digits;
    if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
      ++j;
      while (j < s.size() && is_digit(s[j])) frac_digits += s[j++];
    }

    std::string words;
    const bool leading_zero = int_digits.size() > 1 && int_digits[0] == '0';
    const bool in_range = int_digits.size() <= 6 && !leading_zero;
    if (in_range) {
      words = number_to_words(std::stoll(int_digits));
    } else {
      words = spell_digits(int_digits);
    }
    if (!frac_digits.empty()) {
      words += " point " + spell_digits(frac_digits);
    } else if (in_range && j + 1 < s.size()) {
      const std::string suffix = s.substr(j, 2);
      const bool boundary = j + 2 >= s.size() || !is_alnum(s[j + 2]);
      if (boundary && (suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th")) {
        words = ordinalize(words);
        j += 2;
      }
    }
    if (!out.empty() && is_alnum(out.back())) out += ' ';
    out += words;
    if (j < s.size() && is_alnum(s[j])) out += ' ';
    i = j;
  }
  return out;
}

std::string expand_abbreviations(const std::string& s, const AbbreviationTable& table) {
  std::vector<std::pair<std::string, std::string>> keys = table.entries();
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    bool matched = false;
    if (i == 0 || !is_alnum(s[i - 1])) {
      for (const auto& [key, expansion] : keys) {
        if (key.empty() || s.compare(i, key.size(), key) != 0) continue;
        const std::size_t end = i + key.size();
        const bool closed = key.back() == '.' || end >= s.size() || !is_alnum(s[end]);
        if (!closed) continue;
        out += expansion;
        i = end;
        matched = true;
        break;
      }
    }
    if (!matched) out += s[i++];
  }
  return out;
}

std::string lower_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

AbbreviationTable::AbbreviationTable(std::vector<std::pair<std::string, std::string>> entries) {
  for (auto& [k, v] : entries) entries_.emplace_back(lower_ascii(k), lower_ascii(v));
}

const AbbreviationTable& AbbreviationTable::standard() {
  static const AbbreviationTable table({
      {"dr.", "doctor"},      {"st.", "saint"},       {"mr.", "mister"},
      {"mrs.", "missus"},     {"ms.", "miss"},        {"etc.", "et cetera"},
      {"jr.", "junior"},      {"sr.", "senior"},      {"vs.", "versus"},
      {"prof.", "professor"}, {"capt.", "captain"},   {"lt.", "lieutenant"},
      {"col.", "colonel"},    {"sgt.", "sergeant"},   {"gen.", "general"},
      {"rev.", "reverend"},   {"hon.", "honorable"},  {"mt.", "mount"},
      {"ave.", "avenue"},
  });
  return table;
}

AbbreviationTable AbbreviationTable::load_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation table " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError(line_no, "expected abbreviation<TAB>expansion");
    }
    entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return AbbreviationTable(std::move(entries));
}

std::string number_to_words(std::int64_t n) {
  if (n < 0 || n > 999'999) {
    throw IndexError("number_to_words supports 0..999999, got " + std::to_string(n));
  }
  if (n < 1000) return under_thousand(static_cast<int>(n));
  std::string out = under_thousand(static_cast<int>(n / 1000)) + " thousand";
  if (n % 1000 != 0) out += " " + under_thousand(static_cast<int>(n % 1000));
  return out;
}

std::string transliterate_ascii(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) { cp = b0; len = 1; }
    else if ((b0 & 0xE0) == 0xC0) { cp = b0 & 0x1F; len = 2; }
    else if ((b0 & 0xF0) == 0xE0) { cp = b0 & 0x0F; len = 3; }
    else if ((b0 & 0xF8) == 0xF0) { cp = b0 & 0x07; len = 4; }
    else { ++i; continue; }  // stray continuation or invalid lead byte
    if (i + static_cast<std::size_t>(len) > utf8.size()) break;
    bool valid = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(utf8[i + static_cast<std::size_t>(k)]);
      if ((b & 0xC0) != 0x80) { valid = false; break; }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!valid) { ++i; continue; }
    i += static_cast<std::size_t>(len);
    append_utf8_fold(out, cp);
  }
  return out;
}

NormalizedText normalize_text(std::string_view raw, const AbbreviationTable& abbreviations) {
  std::string s = lower_ascii(transliterate_ascii(raw));
  for (char& c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7F) c = ' ';
  }
  s = expand_numbers(s);

  std::string symbols;
  for (char c : s) {
    if (c == '&') symbols += " and ";
    else if (c == '%') symbols += " percent ";
    else symbols += c;
  }
  s = expand_abbreviations(symbols, abbreviations);

  NormalizedText out;
  for (char c : s) {
    if (c == ' ') {
      if (!out.text.empty() && out.text.back() != ' ') out.text += ' ';
    } else {
      out.text += c;
    }
  }
  if (!out.text.empty() && out.text.back() == ' ') out.text.pop_back();
  return out;
}

}  // namespace emotts::text
