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

#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ocrkit/processor.h"
#include "ocrkit/serve.h"

namespace ocrkit::mcp {

using Json = nlohmann::json;

enum class Source { kLocal, kHostedCloud, kSelfHosted };
enum class Transport { kStdio, kStreamableHttp };

std::string_view SourceName(Source s);
std::optional<Source> ParseSource(std::string_view s);
std::string_view TransportName(Transport t);
std::optional<Transport> ParseTransport(std::string_view s);

struct McpConfig {
  PipelineKind pipeline = PipelineKind::kOcr;
  Source source = Source::kLocal;
  std::optional<std::string> server_url;
  std::optional<std::string> access_token;
  Transport transport = Transport::kStdio;
  std::string device = "cpu";
  int timeout_seconds = 60;
  // Streamable HTTP listener.
  std::string host = "127.0.0.1";
  int port = 8090;
  int parallelism = 1;
};

// SelfHosted and HostedCloud need a server URL; HostedCloud also a token.
void ValidateMcpConfig(const McpConfig &cfg);

inline constexpr const char *kDefaultProtocolVersion = "2025-03-26";
inline constexpr const char *kEnvPipeline = "OCRKIT_MCP_PIPELINE";
inline constexpr const char *kEnvSource = "OCRKIT_MCP_SOURCE";
inline constexpr const char *kEnvServerUrl = "OCRKIT_MCP_SERVER_URL";
inline constexpr const char *kEnvAccessToken = "OCRKIT_MCP_ACCESS_TOKEN";

// Result of one tool invocation: canonical JSON, plus Markdown for Structure.
struct ToolOutput {
  std::string json;
  std::optional<std::string> markdown;
};

class ToolBackend {
 public:
  virtual ~ToolBackend() = default;
  // `data` holds the raw input file bytes.
  virtual ToolOutput Call(PipelineKind kind, const std::vector<uint8_t> &data) = 0;
};

// Runs pipelines in-process. The configured pipeline's pool is built up
// front; a Structure pool is built on first use when only OCR was preloaded.
class LocalBackend : public ToolBackend {
 public:
  LocalBackend(PipelineConfig pipeline, PipelineKind preload, int parallelism,
               std::chrono::milliseconds wait);
  ToolOutput Call(PipelineKind kind, const std::vector<uint8_t> &data) override;

 private:
  serve::InstancePool &PoolFor(PipelineKind kind);

  PipelineConfig pipeline_;
  int parallelism_;
  std::chrono::milliseconds wait_;
  std::mutex mu_;
  std::shared_ptr<serve::InstancePool> ocr_pool_;
  std::shared_ptr<serve::InstancePool> structure_pool_;
};

// Forwards to a service exposing the /v1 endpoints, with an optional bearer
// token.
class RemoteBackend : public ToolBackend {
 public:
  RemoteBackend(std::string server_url, std::optional<std::string> token, int timeout_seconds)
      : url_(std::move(server_url)), token_(std::move(token)), timeout_(timeout_seconds) {}
  ToolOutput Call(PipelineKind kind, const std::vector<uint8_t> &data) override;

 private:
  std::string url_;
  std::optional<std::string> token_;
  int timeout_;
};

// Splits a /v1 response body into canonical JSON and Markdown.
ToolOutput SplitResult(const std::string &body);

class McpServer {
 public:
  McpServer(McpConfig cfg, std::shared_ptr<ToolBackend> backend);

  // Returns the response for a request, nullopt for a notification.
  std::optional<Json> Handle(const Json &message);
  // Parses one serialized message; malformed input yields a parse error reply.
  std::optional<std::string> HandleText(std::string_view text);

  // Newline-delimited JSON-RPC until EOF.
  void ServeStdio(std::istream &in, std::ostream &out);
  // Registers POST/GET/DELETE /mcp on an HTTP server.
  void Attach(httplib::Server &server);

  Json ToolList() const;
  const McpConfig &config() const { return cfg_; }

 private:
  Json CallTool(const Json &params);

  McpConfig cfg_;
  std::shared_ptr<ToolBackend> backend_;
  std::mutex sessions_mu_;
  std::set<std::string> sessions_;
};

// Builds the backend that matches cfg.source.
std::shared_ptr<ToolBackend> MakeBackend(const McpConfig &cfg, const PipelineConfig &pipeline);

}  // namespace ocrkit::mcp
