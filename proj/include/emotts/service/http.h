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

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "emotts/pipeline/synthesizer.h"
#include "emotts/service/config.h"

namespace emotts::service {

// Transport-independent response.
struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

// Stable machine-readable error codes carried in every error body
// {"code", "field", "message"}.
namespace error_code {
inline constexpr const char* kInvalidRequest = "invalid_request";
inline constexpr const char* kUnknownSpeaker = "unknown_speaker";
inline constexpr const char* kUnknownEmotion = "unknown_emotion";
inline constexpr const char* kTextTooLong = "text_too_long";
inline constexpr const char* kModelNotLoaded = "model_not_loaded";
inline constexpr const char* kNotFound = "not_found";
inline constexpr const char* kInternal = "internal_error";
}  // namespace error_code

// Validated form of a synthesize / mel request body
// {"text", "speaker_id"?, "emotion"? ("auto" or a name), "seed"?}.
struct ParsedRequest {
  pipeline::SynthesisRequest request;
  std::string error_field;  // empty when valid
  std::string error_code;
  std::string error_message;
};

// Endpoints over shared read-only models. Every method is thread-safe.
class SynthesisService {
 public:
  SynthesisService(std::shared_ptr<const pipeline::ModelBundle> bundle, ServiceConfig config);

  const ServiceConfig& config() const { return config_; }
  const pipeline::Synthesizer& synthesizer() const { return synthesizer_; }

  // GET /v1/speakers -> {"speakers": [{"id", "gender"}], "default"}
  HttpResponse speakers() const;
  // GET /v1/emotions -> {"emotions": {"amused": 0, ...}}
  HttpResponse emotions() const;
  // GET /v1/health
  HttpResponse health() const;
  // POST /v1/synthesize -> audio/wav with X-Emotion-Id, X-Emotion-Name and
  // X-Emotion-Mode headers.
  HttpResponse synthesize(const std::string& body) const;
  // POST /v1/mel -> {"frames", "n_mels", "mel": [[...]], "emotion",
  // "phonemes", "durations", "timings"}; 404 when diagnostics are disabled.
  HttpResponse mel(const std::string& body) const;

  ParsedRequest parse_request(const std::string& body) const;

  // Routes by method and path; unknown routes give 404.
  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::string& body) const;

 private:
  // Maps library errors to HTTP statuses; unexpected ones become 500 with
  // an opaque incident id.
  HttpResponse guarded(const std::function<HttpResponse()>& fn) const;

  std::shared_ptr<const pipeline::ModelBundle> bundle_;
  ServiceConfig config_;
  pipeline::Synthesizer synthesizer_;
  mutable std::atomic<unsigned long long> incidents_{0};
};

HttpResponse error_response(int status, const std::string& code, const std::string& field,
                            const std::string& message);

// Blocking HTTP/1.1 server. `on_ready(port)` fires once the socket is
// bound (port 0 binds an ephemeral port). Returns when stop() is called.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const SynthesisService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Throws IoError if the address cannot be bound.
  void listen(const std::string& host, int port,
              const std::function<void(int port)>& on_ready = {});
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace emotts::service
