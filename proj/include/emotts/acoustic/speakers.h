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
#include <vector>

namespace emotts::acoustic {

// Speaker name -> embedding row, persisted as speakers.json ({"name": id}).
// Ids are dense, 0-based, and assigned in sorted name order when built
// from a corpus.
class SpeakerTable {
 public:
  SpeakerTable() = default;
  explicit SpeakerTable(std::vector<std::string> names);  // ids are positions

  static SpeakerTable from_names(std::vector<std::string> names);  // sorts, dedups

  int size() const { return static_cast<int>(names_.size()); }
  bool empty() const { return names_.empty(); }
  // Throws UnknownSpeaker listing the known names.
  int id(const std::string& name) const;
  const std::string& name(int id) const;
  bool contains(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

  std::string to_json_text() const;
  // Throws ConfigError unless ids form exactly 0..n-1.
  static SpeakerTable parse_json_text(const std::string& text);

  void save(const std::filesystem::path& path) const;
  // Throws MissingAsset if the file is absent.
  static SpeakerTable load(const std::filesystem::path& path);

 private:
  std::vector<std::string> names_;
};

}  // namespace emotts::acoustic
