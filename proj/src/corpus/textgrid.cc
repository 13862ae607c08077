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

#include "emotts/corpus/textgrid.h"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <iomanip>

#include "emotts/errors.h"

namespace emotts::corpus {

namespace {

// Both TextGrid text forms carry the same ordered stream of values; the long
// form merely interleaves "key =" labels and "[n]" indices. We lex values
// only: quoted strings, numbers and the <exists>/<absent> flags.
struct Token {
  enum Kind { kString, kNumber, kFlag } kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 0;
};

std::string utf16_to_utf8(std::string_view bytes, bool little_endian) {
  std::string out;
  for (std::size_t i = 2; i + 1 < bytes.size(); i += 2) {
    const auto lo = static_cast<unsigned char>(bytes[i]);
    const auto hi = static_cast<unsigned char>(bytes[i + 1]);
    char32_t cp = little_endian ? (lo | (hi << 8)) : ((lo << 8) | hi);
    if (cp >= 0xD800 && cp <= 0xDBFF && i + 3 < bytes.size()) {
      const auto lo2 = static_cast<unsigned char>(bytes[i + 2]);
      const auto hi2 = static_cast<unsigned char>(bytes[i + 3]);
      const char32_t low = little_endian ? (lo2 | (hi2 << 8)) : ((lo2 << 8) | hi2);
      cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
      i += 2;
    }
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }
  return out;
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '"') {
      const std::size_t start_line = line;
      std::string text;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            text += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (s[i] == '\n') ++line;
        text += s[i++];
      }
      if (!closed) throw ParseError(start_line, "unterminated string");
      tokens.push_back({Token::kString, std::move(text), 0.0, start_line});
    } else if (c == '[') {
      while (i < s.size() && s[i] != ']' && s[i] != '\n') ++i;
      if (i < s.size() && s[i] == ']') ++i;
    } else if (c == '<') {
      const auto end = s.find('>', i);
      if (end == std::string_view::npos) throw ParseError(line, "unterminated flag");
      const std::string flag(s.substr(i + 1, end - i - 1));
      if (flag != "exists" && flag != "absent") {
        throw ParseError(line, "unknown flag <" + flag + ">");
      }
      tokens.push_back({Token::kFlag, flag, 0.0, line});
      i = end + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                              s[j] == '.' || s[j] == '-' || s[j] == '+')) {
        ++j;
      }
      const std::string text(s.substr(i, j - i));
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0') {
        throw ParseError(line, "malformed number '" + text + "'");
      }
      tokens.push_back({Token::kNumber, text, v, line});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      // A key such as "xmin" or "intervals"; optionally followed by ":" or "=".
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                              s[i] == '_' || s[i] == '?')) {
        ++i;
      }
    } else if (c == '!') {
      while (i < s.size() && s[i] != '\n') ++i;  // comment in short form
    } else {
      ++i;  // '=', ':', whitespace, BOM remnants
    }
  }
  return tokens;
}

class Reader {
 public:
  explicit Reader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& next(Token::Kind kind, const char* what) {
    if (pos_ >= tokens_.size()) {
      throw ParseError(last_line(), std::string("unexpected end of input, expected ") + what);
    }
    const Token& t = tokens_[pos_];
    if (t.kind != kind) {
      throw ParseError(t.line, std::string("expected ") + what + ", found '" + t.text + "'");
    }
    ++pos_;
    return t;
  }

  double number(const char* what) { return next(Token::kNumber, what).number; }
  const std::string& string(const char* what) { return next(Token::kString, what).text; }

  std::size_t count(const char* what) {
    const Token& t = next(Token::kNumber, what);
    if (t.number < 0 || t.number != static_cast<double>(static_cast<long long>(t.number))) {
      throw ParseError(t.line, std::string("invalid ") + what);
    }
    return static_cast<std::size_t>(t.number);
  }

  std::size_t line() const { return pos_ < tokens_.size() ? tokens_[pos_].line : last_line(); }
  bool at_flag() const { return pos_ < tokens_.size() && tokens_[pos_].kind == Token::kFlag; }
  const Token& flag() { return next(Token::kFlag, "<exists>"); }

 private:
  std::size_t last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<IntervalTier> parse_textgrid(std::string_view content) {
  std::string decoded;
  if (content.size() >= 2 && static_cast<unsigned char>(content[0]) == 0xFF &&
      static_cast<unsigned char>(content[1]) == 0xFE) {
    decoded = utf16_to_utf8(content, true);
    content = decoded;
  } else if (content.size() >= 2 && static_cast<unsigned char>(content[0]) == 0xFE &&
             static_cast<unsigned char>(content[1]) == 0xFF) {
    decoded = utf16_to_utf8(content, false);
    content = decoded;
  } else if (content.size() >= 3 && content.substr(0, 3) == "\xEF\xBB\xBF") {
    content.remove_prefix(3);
  }

  Reader r(lex(content));
  if (r.string("file type") != "ooTextFile") {
    throw ParseError(1, "not a Praat text file (missing ooTextFile)");
  }
  if (r.string("object class") != "TextGrid") {
    throw ParseError(1, "object class is not TextGrid");
  }
  r.number("xmin");
  r.number("xmax");
  std::size_t n_tiers = 0;
  if (r.at_flag()) {
    if (r.flag().text == "absent") return {};
  }
  n_tiers = r.count("tier count");

  std::vector<IntervalTier> tiers;
  for (std::size_t t = 0; t < n_tiers; ++t) {
    const std::string cls = r.string("tier class");
    IntervalTier tier;
    tier.name = r.string("tier name");
    r.number("tier xmin");
    r.number("tier xmax");
    const std::size_t n = r.count("interval count");
    if (cls == "IntervalTier") {
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t line = r.line();
        Interval iv;
        iv.xmin = r.number("interval xmin");
        iv.xmax = r.number("interval xmax");
        iv.label = r.string("interval text");
        if (!(iv.xmin < iv.xmax)) {
          throw ParseError(line, "interval '" + iv.label + "' has xmax <= xmin");
        }
        if (tier.intervals.empty() && iv.xmin < 0.0) {
          throw ParseError(line, "first interval starts before 0");
        }
        if (!tier.intervals.empty() && iv.xmin < tier.intervals.back().xmax - 1e-9) {
          throw ParseError(line, "interval '" + iv.label + "' overlaps its predecessor");
        }
        tier.intervals.push_back(std::move(iv));
      }
      tiers.push_back(std::move(tier));
    } else if (cls == "TextTier") {
      for (std::size_t k = 0; k < n; ++k) {
        r.number("point time");
        r.string("point mark");
      }
    } else {
      throw ParseError(r.line(), "unknown tier class '" + cls + "'");
    }
  }
  return tiers;
}

const IntervalTier* find_tier(const std::vector<IntervalTier>& tiers, std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string o(s);
    for (char& c : o) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return o;
  };
  const std::string want = lower(name);
  for (const auto& t : tiers) {
    if (lower(t.name) == want) return &t;
  }
  return nullptr;
}

std::string emit_textgrid(const std::vector<IntervalTier>& tiers) {
  auto quote = [](const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
      if (c == '"') o += '"';
      o += c;
    }
    return o + "\"";
  };
  double xmin = 0.0;
  double xmax = 0.0;
  for (const auto& t : tiers) {
    if (!t.intervals.empty()) xmax = std::max(xmax, t.intervals.back().xmax);
  }
  std::ostringstream out;
  out << std::setprecision(17);
  out << "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  out << "xmin = " << xmin << "\nxmax = " << xmax << "\ntiers? <exists>\n";
  out << "size = " << tiers.size() << "\nitem []:\n";
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    const auto& tier = tiers[t];
    out << "    item [" << t + 1 << "]:\n";
    out << "        class = \"IntervalTier\"\n";
    out << "        name = " << quote(tier.name) << "\n";
    out << "        xmin = " << xmin << "\n        xmax = " << xmax << "\n";
    out << "        intervals: size = " << tier.intervals.size() << "\n";
    for (std::size_t k = 0; k < tier.intervals.size(); ++k) {
      const auto& iv = tier.intervals[k];
      out << "        intervals [" << k + 1 << "]:\n";
      out << "            xmin = " << iv.xmin << "\n";
      out << "            xmax = " << iv.xmax << "\n";
      out << "            text = " << quote(iv.label) << "\n";
    }
  }
  return out.str();
}

}  // namespace emotts::corpus
