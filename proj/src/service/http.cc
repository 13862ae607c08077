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

#include "emotts/service/http.h"

#include <cstdio>
#include <iostream>

#include "emotts/errors.h"
#include "emotts/vocoder/wav.h"

// Last: <resolv.h>, pulled in by httplib, defines a `_res` macro that
// collides with Eigen internals.
#include <httplib.h>

namespace emotts::service {

namespace {

constexpr const char* kExposedHeaders = "X-Emotion-Id, X-Emotion-Name, X-Emotion-Mode";

nlohmann::json emotion_json(const pipeline::SynthesisDiagnostics& d) {
  return {{"id", d.emotion.id}, {"name", d.emotion.name()}, {"auto", d.automatic}};
}

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

HttpResponse error_response(int status, const std::string& code, const std::string& field,
                            const std::string& message) {
  HttpResponse r;
  r.status = status;
  r.body = nlohmann::json{{"code", code}, {"field", field}, {"message", message}}.dump();
  return r;
}

SynthesisService::SynthesisService(std::shared_ptr<const pipeline::ModelBundle> bundle,
                                   ServiceConfig config)
    : bundle_(std::move(bundle)), config_(std::move(config)), synthesizer_(bundle_) {
  if (!config_.default_speaker.empty() && !bundle_->speakers.contains(config_.default_speaker)) {
    throw ConfigError("default speaker '" + config_.default_speaker + "' is not in the speaker table");
  }
}

HttpResponse SynthesisService::speakers() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& name : bundle_->speakers.names()) {
    list.push_back({{"id", name}, {"gender", bundle_->gender(name)}});
  }
  nlohmann::json body = {{"speakers", list}};
  if (!config_.default_speaker.empty()) {
    body["default"] = config_.default_speaker;
  } else if (!bundle_->speakers.empty()) {
    body["default"] = bundle_->speakers.name(0);
  } else {
    body["default"] = nullptr;
  }
  return {200, "application/json", body.dump(), {}};
}

HttpResponse SynthesisService::emotions() const {
  nlohmann::ordered_json table;
  for (int i = 0; i < kNumEmotions; ++i) table[std::string(kEmotionNames[static_cast<std::size_t>(i)])] = i;
  nlohmann::ordered_json body = {{"emotions", table}};
  return {200, "application/json", body.dump(), {}};
}

HttpResponse SynthesisService::health() const {
  const nlohmann::json body = {{"status", "ok"},
                               {"vocoder", bundle_->vocoder->name()},
                               {"classifier", bundle_->classifier != nullptr},
                               {"max_text_length", config_.max_text_length}};
  return {200, "application/json", body.dump(), {}};
}

ParsedRequest SynthesisService::parse_request(const std::string& body) const {
  ParsedRequest p;
  auto fail = [&](const char* code, const char* field, std::string message) {
    p.error_code = code;
    p.error_field = field;
    p.error_message = std::move(message);
    return p;
  };
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return fail(error_code::kInvalidRequest, "", "request body must be a JSON object");
  }
  if (!j.contains("text") || !j["text"].is_string()) {
    return fail(error_code::kInvalidRequest, "text", "text is required and must be a string");
  }
  p.request.text = j["text"].get<std::string>();
  if (trim_copy(p.request.text).empty()) {
    return fail(error_code::kInvalidRequest, "text", "text must not be empty");
  }
  if (static_cast<int>(p.request.text.size()) > config_.max_text_length) {
    return fail(error_code::kTextTooLong, "text",
                "text exceeds " + std::to_string(config_.max_text_length) + " bytes");
  }

  if (j.contains("speaker_id") && !j["speaker_id"].is_null()) {
    if (!j["speaker_id"].is_string()) {
      return fail(error_code::kInvalidRequest, "speaker_id", "speaker_id must be a string");
    }
    p.request.speaker = j["speaker_id"].get<std::string>();
  } else if (!config_.default_speaker.empty()) {
    p.request.speaker = config_.default_speaker;
  } else if (!bundle_->speakers.empty()) {
    p.request.speaker = bundle_->speakers.name(0);
  }
  if (!bundle_->speakers.contains(p.request.speaker)) {
    return fail(error_code::kUnknownSpeaker, "speaker_id",
                "unknown speaker '" + p.request.speaker + "'");
  }

  std::string emotion = "auto";
  if (j.contains("emotion") && !j["emotion"].is_null()) {
    if (!j["emotion"].is_string()) {
      return fail(error_code::kInvalidRequest, "emotion", "emotion must be a string");
    }
    emotion = j["emotion"].get<std::string>();
  }
  try {
    p.request.emotion = pipeline::EmotionChoice::parse(emotion);
  } catch (const UnknownEmotion& e) {
    return fail(error_code::kUnknownEmotion, "emotion", e.what());
  }

  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      return fail(error_code::kInvalidRequest, "seed", "seed must be a non-negative integer");
    }
    p.request.seed = j["seed"].get<std::uint64_t>();
  }
  return p;
}

HttpResponse SynthesisService::guarded(const std::function<HttpResponse()>& fn) const {
  try {
    return fn();
  } catch (const SynthesisError& e) {
    return error_response(400, error_code::kInvalidRequest, "text", e.what());
  } catch (const UnknownSpeaker& e) {
    return error_response(404, error_code::kUnknownSpeaker, "speaker_id", e.what());
  } catch (const UnknownEmotion& e) {
    return error_response(400, error_code::kUnknownEmotion, "emotion", e.what());
  } catch (const ModelNotLoaded& e) {
    return error_response(503, error_code::kModelNotLoaded, "", e.what());
  } catch (const std::exception& e) {
    char id[32];
    std::snprintf(id, sizeof(id), "E%06llu", ++incidents_);
    std::cerr << "internal error " << id << ": " << e.what() << "\n";
    auto r = error_response(500, error_code::kInternal, "", std::string("internal error ") + id);
    r.headers["X-Incident-Id"] = id;
    return r;
  }
}

HttpResponse SynthesisService::synthesize(const std::string& body) const {
  return guarded([&] {
    const auto parsed = parse_request(body);
    if (!parsed.error_code.empty()) {
      const int status = parsed.error_code == error_code::kUnknownSpeaker ? 404 : 400;
      return error_response(status, parsed.error_code, parsed.error_field, parsed.error_message);
    }
    const auto result = synthesizer_.synthesize(parsed.request);
    const auto& d = result.diagnostics;
    HttpResponse r;
    r.content_type = "audio/wav";
    r.body = vocoder::encode_wav(result.waveform);
    r.headers["X-Emotion-Id"] = std::to_string(d.emotion.id);
    r.headers["X-Emotion-Name"] = std::string(d.emotion.name());
    r.headers["X-Emotion-Mode"] = d.automatic ? "auto" : "manual";
    r.headers["X-Audio-Seconds"] = std::to_string(result.waveform.seconds());
    return r;
  });
}

HttpResponse SynthesisService::mel(const std::string& body) const {
  if (!config_.diagnostics) {
    return error_response(404, error_code::kNotFound, "", "diagnostics are disabled");
  }
  return guarded([&] {
    const auto parsed = parse_request(body);
    if (!parsed.error_code.empty()) {
      const int status = parsed.error_code == error_code::kUnknownSpeaker ? 404 : 400;
      return error_response(status, parsed.error_code, parsed.error_field, parsed.error_message);
    }
    const auto d = synthesizer_.analyze(parsed.request);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index t = 0; t < d.mel.rows(); ++t) {
      std::vector<double> row(d.mel.cols());
      for (Eigen::Index m = 0; m < d.mel.cols(); ++m) row[static_cast<std::size_t>(m)] = d.mel(t, m);
      rows.push_back(std::move(row));
    }
    nlohmann::json body_json = {
        {"frames", d.mel.rows()},
        {"n_mels", d.mel.cols()},
        {"mel", std::move(rows)},
        {"emotion", emotion_json(d)},
        {"phonemes", d.phonemes},
        {"durations", d.durations},
        {"timings",
         {{"frontend", d.timings.frontend},
          {"classifier", d.timings.classifier},
          {"acoustic", d.timings.acoustic},
          {"total", d.timings.total}}}};
    if (d.classifier) body_json["probabilities"] = d.classifier->probs;
    HttpResponse r;
    r.body = body_json.dump();
    r.headers["X-Emotion-Id"] = std::to_string(d.emotion.id);
    r.headers["X-Emotion-Name"] = std::string(d.emotion.name());
    r.headers["X-Emotion-Mode"] = d.automatic ? "auto" : "manual";
    return r;
  });
}

HttpResponse SynthesisService::handle(const std::string& method, const std::string& path,
                                      const std::string& body) const {
  if (method == "GET" && path == "/v1/speakers") return speakers();
  if (method == "GET" && path == "/v1/emotions") return emotions();
  if (method == "GET" && path == "/v1/health") return health();
  if (method == "POST" && path == "/v1/synthesize") return synthesize(body);
  if (method == "POST" && path == "/v1/mel") return mel(body);
  return error_response(404, error_code::kNotFound, "", "no route for " + method + " " + path);
}

struct HttpServer::Impl {
  std::shared_ptr<const SynthesisService> service;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const SynthesisService> service)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto& srv = impl_->server;
  const int workers = impl_->service->config().worker_count();
  srv.new_task_queue = [workers] { return new httplib::ThreadPool(static_cast<std::size_t>(workers)); };
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Expose-Headers", kExposedHeaders}});
  auto route = [svc = impl_->service](const httplib::Request& req, httplib::Response& res) {
    const HttpResponse r = svc->handle(req.method, req.path, req.body);
    res.status = r.status;
    for (const auto& [k, v] : r.headers) res.set_header(k, v);
    res.set_content(r.body, r.content_type);
  };
  srv.Get(R"(/v1/.*)", route);
  srv.Post(R"(/v1/.*)", route);
  srv.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const auto r = error_response(res.status, res.status == 404 ? error_code::kNotFound
                                                                : error_code::kInvalidRequest,
                                  "", "no route for " + req.method + " " + req.path);
    res.set_content(r.body, r.content_type);
  });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::listen(const std::string& host, int port,
                        const std::function<void(int port)>& on_ready) {
  auto& srv = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = srv.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
  } else if (!srv.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  if (on_ready) on_ready(bound);
  srv.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace emotts::service
