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

// Versioned tensor container shared by the classifier, acoustic model,
// vocoder, and per-utterance feature files.
//
// Layout (all integers little-endian):
//   bytes 0..7   magic "EMOTTSCK"
//   u32          format version (kCheckpointVersion)
//   u32          reserved, zero
//   u64          header length H
//   H bytes      UTF-8 JSON: {"kind", "version", "config", "tensors":
//                [{"name", "rows", "cols", "offset"}]}
//   payload      float64 values, row-major per tensor, at the listed
//                byte offsets relative to the payload start

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace emotts::io {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string kind;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;

  const Eigen::MatrixXd& tensor(const std::string& name) const;
};

// Writes to a temporary sibling and renames over `path`.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Writes `text` atomically (temp file + rename).
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace emotts::io
