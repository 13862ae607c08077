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
#include <stdexcept>
#include <string>

namespace emotts {

// Base of every error thrown by the library. `code()` is a stable
// machine-readable identifier used by the CLI and the HTTP service.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define EMOTTS_DEFINE_ERROR(Name, Code)                                  \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(Code, message) {} \
  };

EMOTTS_DEFINE_ERROR(LexiconMissing, "lexicon_missing")
EMOTTS_DEFINE_ERROR(AudioError, "audio_error")
EMOTTS_DEFINE_ERROR(MissingAsset, "missing_asset")
EMOTTS_DEFINE_ERROR(AlignmentMismatch, "alignment_mismatch")
EMOTTS_DEFINE_ERROR(DataError, "data_error")
EMOTTS_DEFINE_ERROR(ModelNotLoaded, "model_not_loaded")
EMOTTS_DEFINE_ERROR(IndexError, "index_error")
EMOTTS_DEFINE_ERROR(ShapeError, "shape_error")
EMOTTS_DEFINE_ERROR(UnknownSpeaker, "unknown_speaker")
EMOTTS_DEFINE_ERROR(UnknownEmotion, "unknown_emotion")
EMOTTS_DEFINE_ERROR(NonFiniteLoss, "non_finite_loss")
EMOTTS_DEFINE_ERROR(WeightMismatch, "weight_mismatch")
EMOTTS_DEFINE_ERROR(IoError, "io_error")
EMOTTS_DEFINE_ERROR(RateMismatch, "rate_mismatch")
EMOTTS_DEFINE_ERROR(ConfigError, "config_error")
EMOTTS_DEFINE_ERROR(SynthesisError, "synthesis_error")

#undef EMOTTS_DEFINE_ERROR

// Malformed TextGrid (or other line-oriented) input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("parse_error",
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Malformed pipe-delimited metadata record. `field()` is 1-based.
class FormatError : public Error {
 public:
  FormatError(int field, const std::string& message)
      : Error("format_error",
              "field " + std::to_string(field) + ": " + message),
        field_(field) {}
  int field() const { return field_; }

 private:
  int field_;
};

}  // namespace emotts
