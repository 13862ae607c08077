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

#include <cstddef>
#include <filesystem>
#include <vector>

namespace emotts::io {

// A NumPy array read into doubles, C order.
struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  std::size_t size() const;
};

// Reads .npy format versions 1-3 holding little-endian float32 or float64
// in C order. Throws IoError on anything else.
NpyArray read_npy(const std::filesystem::path& path);
// Writes float64, format version 1.0.
void write_npy(const std::filesystem::path& path, const NpyArray& array);

}  // namespace emotts::io
