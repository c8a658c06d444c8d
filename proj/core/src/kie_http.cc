// Copyright (c) 2026 ocrkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenAI-compatible HTTP adapters for the chat, multimodal and embedding
// clients.

#include <memory>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "ocrkit/base64.h"
#include "ocrkit/error.h"
#include "ocrkit/kie.h"

namespace ocrkit::kie {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path below the origin, no trailing slash
};

Endpoint ParseBaseUrl(const std::string &url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    Fail(ErrorCode::kConfigError, "client base_url must start with http:// or https://");
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) ep.prefix = url.substr(path_start);
  while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  return ep;
}

class HttpJsonClient {
 public:
  HttpJsonClient(const ClientConfig &cfg, ErrorCode failure)
      : cfg_(cfg), endpoint_(ParseBaseUrl(cfg.base_url)), failure_(failure) {
    if (cfg.api_key.empty()) {
      Fail(ErrorCode::kClientFailure, "client '" + cfg.module_name + "' has no api_key");
    }
  }

  json Post(const std::string &path, const json &body) const {
    httplib::Client client(endpoint_.origin);
    client.set_connection_timeout(cfg_.timeout_seconds);
    client.set_read_timeout(cfg_.timeout_seconds);
    client.set_bearer_token_auth(cfg_.api_key);
    const auto res = client.Post(endpoint_.prefix + path, body.dump(), "application/json");
    if (!res) {
      Fail(failure_, "request to " + cfg_.base_url + path + " failed: " +
                         httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      Fail(failure_, "request to " + cfg_.base_url + path + " returned HTTP " +
                         std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception &e) {
      Fail(failure_, std::string("malformed response: ") + e.what());
    }
  }

  const ClientConfig &config() const { return cfg_; }

  std::string ChatContent(const json &response) const {
    try {
      return response.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception &e) {
      Fail(failure_, std::string("unexpected chat response: ") + e.what());
    }
  }

 private:
  ClientConfig cfg_;
  Endpoint endpoint_;
  ErrorCode failure_;
};

class HttpLlm : public LlmClient {
 public:
  explicit HttpLlm(const ClientConfig &cfg) : http_(cfg, ErrorCode::kClientFailure) {}

  std::string Complete(const std::string &prompt) override {
    const json body = {{"model", http_.config().model_name},
                       {"temperature", 0},
                       {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};
    return http_.ChatContent(http_.Post("/chat/completions", body));
  }

 private:
  HttpJsonClient http_;
};

class HttpMllm : public MllmClient {
 public:
  explicit HttpMllm(const ClientConfig &cfg) : http_(cfg, ErrorCode::kClientFailure) {}

  std::string Ask(const Image &image, const std::string &question) override {
    const std::string url = "data:image/png;base64," + Base64Encode(EncodePng(image));
    const json content = json::array(
        {{{"type", "text"}, {"text", question}},
         {{"type", "image_url"}, {"image_url", {{"url", url}}}}});
    const json body = {{"model", http_.config().model_name},
                       {"temperature", 0},
                       {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
    return http_.ChatContent(http_.Post("/chat/completions", body));
  }

 private:
  HttpJsonClient http_;
};

class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(const ClientConfig &cfg) : http_(cfg, ErrorCode::kEmbedderFailure) {}

  std::vector<float> Embed(const std::string &text) override {
    const json body = {{"model", http_.config().model_name}, {"input", text}};
    const json res = http_.Post("/embeddings", body);
    try {
      return res.at("data").at(0).at("embedding").get<std::vector<float>>();
    } catch (const json::exception &e) {
      Fail(ErrorCode::kEmbedderFailure, std::string("unexpected embedding response: ") + e.what());
    }
  }

 private:
  HttpJsonClient http_;
};

void CheckApiType(const ClientConfig &cfg) {
  if (cfg.api_type != "mock" && cfg.api_type != "openai") {
    Fail(ErrorCode::kConfigError, "unknown api_type '" + cfg.api_type + "'");
  }
}

}  // namespace

std::shared_ptr<LlmClient> MakeLlmClient(const ClientConfig &cfg) {
  CheckApiType(cfg);
  if (cfg.api_type == "mock") return std::make_shared<EchoLlm>();
  return std::make_shared<HttpLlm>(cfg);
}

std::shared_ptr<MllmClient> MakeMllmClient(const ClientConfig &cfg,
                                           std::map<std::string, std::string> mock_answers) {
  CheckApiType(cfg);
  if (cfg.api_type == "mock") return std::make_shared<ScriptedMllm>(std::move(mock_answers));
  return std::make_shared<HttpMllm>(cfg);
}

std::shared_ptr<Embedder> MakeEmbedder(const ClientConfig &cfg) {
  CheckApiType(cfg);
  if (cfg.api_type == "mock") return std::make_shared<HashingEmbedder>();
  return std::make_shared<HttpEmbedder>(cfg);
}

}  // namespace ocrkit::kie
