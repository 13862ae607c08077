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

#include "emotts/vocoder/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "emotts/errors.h"

namespace emotts::vocoder {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::uint32_t get_u32(const std::string& b, std::size_t at) {
  if (at + 4 > b.size()) throw IoError("truncated WAV data");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
  }
  return v;
}

std::uint16_t get_u16(const std::string& b, std::size_t at) {
  if (at + 2 > b.size()) throw IoError("truncated WAV data");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

struct Chunks {
  WavHeader header;
  std::size_t data_offset = 0;
};

Chunks scan(const std::string& b) {
  if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0 || b.compare(8, 4, "WAVE") != 0) {
    throw IoError("not a RIFF/WAVE stream");
  }
  Chunks c;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::string id = b.substr(at, 4);
    const std::uint32_t size = get_u32(b, at + 4);
    const std::size_t body = at + 8;
    if (id == "fmt ") {
      c.header.format_tag = get_u16(b, body);
      c.header.channels = get_u16(b, body + 2);
      c.header.sample_rate = get_u32(b, body + 4);
      c.header.bits_per_sample = get_u16(b, body + 14);
      if (c.header.format_tag == 0xFFFE && size >= 26) {
        c.header.format_tag = get_u16(b, body + 24);  // extensible subformat
      }
      have_fmt = true;
    } else if (id == "data") {
      c.data_offset = body;
      c.header.data_bytes =
          static_cast<std::uint32_t>(std::min<std::size_t>(size, b.size() - body));
      have_data = true;
      break;
    }
    at = body + size + (size & 1u);
  }
  if (!have_fmt) throw IoError("WAV stream has no fmt chunk");
  if (!have_data) throw IoError("WAV stream has no data chunk");
  return c;
}

}  // namespace

std::string encode_wav(const Waveform& w) {
  if (w.samples.size() == 0) throw IoError("refusing to write an empty waveform");
  if (w.sample_rate <= 0) throw IoError("invalid sample rate");
  const auto n = static_cast<std::uint32_t>(w.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < w.samples.size(); ++i) {
    double s = w.samples(i);
    if (!std::isfinite(s)) s = 0.0;
    s = std::clamp(s, -1.0, 1.0);
    const long q = std::clamp(std::lround(s * 32768.0), -32768L, 32767L);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void write_wav(const Waveform& w, const std::filesystem::path& path) {
  const std::string bytes = encode_wav(w);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

WavHeader parse_wav_header(const std::string& bytes) { return scan(bytes).header; }

Waveform decode_wav(const std::string& b) {
  const Chunks c = scan(b);
  const WavHeader& h = c.header;
  if (h.channels == 0) throw IoError("WAV stream declares zero channels");
  const int bytes_per = h.bits_per_sample / 8;
  const bool is_float = h.format_tag == 3;
  if (!(h.format_tag == 1 && (bytes_per == 2 || bytes_per == 3 || bytes_per == 4)) &&
      !(is_float && bytes_per == 4)) {
    throw IoError("unsupported WAV encoding (format " + std::to_string(h.format_tag) +
                  ", " + std::to_string(h.bits_per_sample) + " bits)");
  }
  const std::size_t frame_bytes = static_cast<std::size_t>(bytes_per) * h.channels;
  const std::size_t frames = h.data_bytes / frame_bytes;
  Waveform w;
  w.sample_rate = static_cast<int>(h.sample_rate);
  w.samples = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t ch = 0; ch < h.channels; ++ch) {
      const std::size_t at = c.data_offset + f * frame_bytes + ch * static_cast<std::size_t>(bytes_per);
      double v = 0.0;
      if (is_float) {
        const std::uint32_t bits = get_u32(b, at);
        float fv;
        std::memcpy(&fv, &bits, sizeof(fv));
        v = fv;
      } else if (bytes_per == 2) {
        v = static_cast<std::int16_t>(get_u16(b, at)) / 32768.0;
      } else if (bytes_per == 3) {
        std::int32_t s = static_cast<unsigned char>(b[at]) |
                         (static_cast<unsigned char>(b[at + 1]) << 8) |
                         (static_cast<signed char>(b[at + 2]) * 65536);
        v = s / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(get_u32(b, at)) / 2147483648.0;
      }
      acc += v;
    }
    w.samples(static_cast<Eigen::Index>(f)) = acc / h.channels;
  }
  return w;
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_wav(ss.str());
}

}  // namespace emotts::vocoder
