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

#include "emotts/io/npy.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "emotts/errors.h"

namespace emotts::io {

namespace {

constexpr char kMagic[] = "\x93NUMPY";

// Value of `key` in the header dict, e.g. 'descr': '<f4' -> <f4.
std::string header_value(const std::string& header, const std::string& key,
                         const std::filesystem::path& path) {
  const auto at = header.find("'" + key + "'");
  if (at == std::string::npos) throw IoError(path.string() + ": npy header lacks " + key);
  auto start = header.find(':', at);
  if (start == std::string::npos) throw IoError(path.string() + ": malformed npy header");
  ++start;
  while (start < header.size() && header[start] == ' ') ++start;
  std::size_t end = start;
  if (header[start] == '(') {
    end = header.find(')', start);
    if (end == std::string::npos) throw IoError(path.string() + ": malformed npy shape");
    return header.substr(start + 1, end - start - 1);
  }
  while (end < header.size() && header[end] != ',' && header[end] != '}') ++end;
  std::string v = header.substr(start, end - start);
  while (!v.empty() && v.back() == ' ') v.pop_back();
  if (v.size() >= 2 && v.front() == '\'' && v.back() == '\'') v = v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

std::size_t NpyArray::size() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

NpyArray read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  if (bytes.size() < 10 || bytes.compare(0, 6, kMagic, 6) != 0) {
    throw IoError(path.string() + ": not an npy file");
  }
  const int major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = static_cast<unsigned char>(bytes[8]) |
                 (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw IoError(path.string() + ": truncated npy header");
    for (int i = 0; i < 4; ++i) {
      header_len |= static_cast<std::size_t>(static_cast<unsigned char>(bytes[8 + i])) << (8 * i);
    }
    offset = 12;
  } else {
    throw IoError(path.string() + ": unsupported npy version " + std::to_string(major));
  }
  if (offset + header_len > bytes.size()) throw IoError(path.string() + ": truncated npy header");
  const std::string header = bytes.substr(offset, header_len);
  const std::string descr = header_value(header, "descr", path);
  if (header_value(header, "fortran_order", path) != "False") {
    throw IoError(path.string() + ": Fortran-ordered arrays are not supported");
  }

  NpyArray arr;
  std::stringstream dims(header_value(header, "shape", path));
  for (std::string item; std::getline(dims, item, ',');) {
    const auto first = item.find_first_not_of(' ');
    if (first == std::string::npos) continue;
    arr.shape.push_back(static_cast<std::size_t>(std::stoull(item.substr(first))));
  }
  const std::size_t count = arr.size();
  const std::size_t data_at = offset + header_len;
  arr.data.resize(count);
  if (descr == "<f8") {
    if (data_at + count * 8 > bytes.size()) throw IoError(path.string() + ": truncated npy data");
    std::memcpy(arr.data.data(), bytes.data() + data_at, count * 8);
  } else if (descr == "<f4") {
    if (data_at + count * 4 > bytes.size()) throw IoError(path.string() + ": truncated npy data");
    for (std::size_t i = 0; i < count; ++i) {
      float f = 0.0f;
      std::memcpy(&f, bytes.data() + data_at + i * 4, 4);
      arr.data[i] = f;
    }
  } else {
    throw IoError(path.string() + ": unsupported npy dtype " + descr);
  }
  return arr;
}

void write_npy(const std::filesystem::path& path, const NpyArray& array) {
  if (array.data.size() != array.size()) throw IoError("npy data does not match its shape");
  std::string shape;
  for (std::size_t d : array.shape) shape += std::to_string(d) + ", ";
  if (array.shape.size() > 1) shape.resize(shape.size() - 1);
  if (array.shape.size() > 1 && !shape.empty() && shape.back() == ',') shape.pop_back();
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': (" + shape + "), }";
  // Pad so magic + version + length + header is a multiple of 64 bytes.
  while ((10 + header.size() + 1) % 64 != 0) header += ' ';
  header += '\n';
  std::string out(kMagic, 6);
  out += '\x01';
  out += '\x00';
  out += static_cast<char>(header.size() & 0xff);
  out += static_cast<char>((header.size() >> 8) & 0xff);
  out += header;
  out.append(reinterpret_cast<const char*>(array.data.data()), array.data.size() * 8);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw IoError("cannot write " + path.string());
  }
}

}  // namespace emotts::io
