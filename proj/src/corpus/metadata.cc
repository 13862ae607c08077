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

#include "emotts/corpus/metadata.h"

#include <sstream>

#include "emotts/errors.h"
#include "emotts/io/checkpoint.h"
#include "emotts/text/phonemes.h"

namespace emotts::corpus {

namespace {

constexpr int kFieldCount = 5;

bool has_forbidden(std::string_view s) {
  return s.find_first_of("|\n\r") != std::string_view::npos;
}

}  // namespace

MetadataRecord parse_metadata_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto bar = line.find('|', start);
    if (bar == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, bar - start));
    start = bar + 1;
  }
  if (fields.size() < kFieldCount) {
    throw FormatError(static_cast<int>(fields.size()) + 1, "missing field; expected 5 pipe-separated fields");
  }
  if (fields.size() > kFieldCount) {
    throw FormatError(kFieldCount + 1, "unexpected extra field; expected 5 pipe-separated fields");
  }

  MetadataRecord r;
  if (fields[0].empty()) throw FormatError(1, "empty file id");
  r.file_id = fields[0];
  if (fields[1].empty()) throw FormatError(2, "empty speaker id");
  r.speaker_id = fields[1];

  const std::string_view braced = fields[2];
  if (braced.size() < 2 || braced.front() != '{' || braced.back() != '}') {
    throw FormatError(3, "phoneme field must be wrapped in braces");
  }
  const auto& vocab = text::PhonemeVocabulary::instance();
  std::istringstream phones{std::string(braced.substr(1, braced.size() - 2))};
  for (std::string p; phones >> p;) {
    if (!vocab.contains(p)) throw FormatError(3, "unknown phoneme '" + p + "'");
    r.phonemes.push_back(std::move(p));
  }

  r.text = fields[3];
  const auto emotion = EmotionLabel::find(fields[4]);
  if (!emotion) throw FormatError(5, "unknown emotion '" + std::string(fields[4]) + "'");
  r.emotion = *emotion;
  return r;
}

std::string serialize_metadata(const MetadataRecord& r) {
  if (r.file_id.empty() || has_forbidden(r.file_id)) throw FormatError(1, "invalid file id");
  if (r.speaker_id.empty() || has_forbidden(r.speaker_id)) throw FormatError(2, "invalid speaker id");
  std::string out = r.file_id + "|" + r.speaker_id + "|{";
  for (std::size_t i = 0; i < r.phonemes.size(); ++i) {
    const auto& p = r.phonemes[i];
    if (p.empty() || p.find_first_of(" {}|\t\n\r") != std::string::npos) {
      throw FormatError(3, "invalid phoneme symbol '" + p + "'");
    }
    if (i > 0) out += ' ';
    out += p;
  }
  if (has_forbidden(r.text)) throw FormatError(4, "text contains a pipe or newline");
  out += "}|" + r.text + "|" + std::string(r.emotion.name());
  return out;
}

std::vector<MetadataRecord> parse_metadata(std::string_view content) {
  std::vector<MetadataRecord> records;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      records.push_back(parse_metadata_line(line));
    } catch (const FormatError& e) {
      throw FormatError(e.field(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<MetadataRecord> load_metadata(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingAsset("metadata file not found: " + path.string());
  }
  return parse_metadata(io::read_text(path));
}

std::string serialize_metadata(const std::vector<MetadataRecord>& records) {
  std::string out;
  for (const auto& r : records) out += serialize_metadata(r) + "\n";
  return out;
}

}  // namespace emotts::corpus
