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
#include <string>
#include <string_view>
#include <vector>

#include "emotts/emotion.h"

namespace emotts::corpus {

// One utterance line: file_id|speaker|{PH ON EMES}|raw text|emotion
struct MetadataRecord {
  std::string file_id;
  std::string speaker_id;
  std::vector<std::string> phonemes;
  std::string text;
  EmotionLabel emotion;

  bool operator==(const MetadataRecord&) const = default;
};

// Throws FormatError naming the 1-based offending field. A trailing '\r' is
// ignored. Phoneme symbols must belong to the phoneme inventory.
MetadataRecord parse_metadata_line(std::string_view line);
std::string serialize_metadata(const MetadataRecord& record);

// Parses a metadata file; blank lines are skipped. Errors are re-thrown with
// the line number prepended to the message.
std::vector<MetadataRecord> parse_metadata(std::string_view content);
std::vector<MetadataRecord> load_metadata(const std::filesystem::path& path);
std::string serialize_metadata(const std::vector<MetadataRecord>& records);

}  // namespace emotts::corpus
