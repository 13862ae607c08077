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

#include <cstdint>
#include <filesystem>
#include <string>

#include "emotts/waveform.h"

namespace emotts::vocoder {

// RIFF/WAVE, PCM16, mono. Samples are clamped to [-1, 1] and scaled by 32768.
std::string encode_wav(const Waveform& w);
void write_wav(const Waveform& w, const std::filesystem::path& path);

// Accepts PCM16/24/32 and IEEE float32, any channel count (averaged to mono).
Waveform decode_wav(const std::string& bytes);
Waveform read_wav(const std::filesystem::path& path);

struct WavHeader {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint32_t data_bytes = 0;
};
WavHeader parse_wav_header(const std::string& bytes);

}  // namespace emotts::vocoder
