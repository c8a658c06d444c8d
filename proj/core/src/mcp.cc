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

#include "ocrkit/mcp.h"

#include <istream>
#include <ostream>
#include <random>

#include "httplib.h"
#include "ocrkit/base64.h"
#include "ocrkit/compose.h"
#include "ocrkit/error.h"
#include "ocrkit/image.h"
#include "ocrkit/input.h"
#include "ocrkit/text.h"

namespace ocrkit::mcp {
namespace {

constexpr int kParseError = -32700;
constexpr int kInvalidRequest = -32600;
constexpr int kMethodNotFound = -32601;
constexpr int kInvalidParams = -32602;

Json RpcError(const Json &id, int code, const std::string &message) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", {{"code", code}, {"message", message}}}};
}

Json RpcResult(const Json &id, Json result) {
  return {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

Json ToolError(const std::string &message) {
  return {{"content", Json::array({{{"type", "text"}, {"text", message}}})}, {"isError", true}};
}

Json InputSchema() {
  return {{"type", "object"},
          {"properties",
           {{"file", {{"type", "string"}, {"description", "Path of an image or PDF file"}}},
            {"data",
             {{"type", "string"}, {"description", "Base64-encoded image or PDF bytes"}}},
            {"options", {{"type", "object"}, {"description", "Reserved for pipeline options"}}}}},
          {"additionalProperties", false}};
}

std::string NewSessionId() {
  static std::mt19937_64 rng{std::random_device{}()};
  static std::mutex mu;
  std::lock_guard lock(mu);
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

std::string_view SourceName(Source s) {
  switch (s) {
    case Source::kLocal: return "local";
    case Source::kHostedCloud: return "hosted_cloud";
    case Source::kSelfHosted: return "self_hosted";
  }
  return "local";
}

std::optional<Source> ParseSource(std::string_view s) {
  const std::string lower = text::AsciiLower(s);
  if (lower == "local") return Source::kLocal;
  if (lower == "hosted_cloud") return Source::kHostedCloud;
  if (lower == "self_hosted") return Source::kSelfHosted;
  return std::nullopt;
}

std::string_view TransportName(Transport t) {
  return t == Transport::kStdio ? "stdio" : "streamable-http";
}

std::optional<Transport> ParseTransport(std::string_view s) {
  const std::string lower = text::AsciiLower(s);
  if (lower == "stdio") return Transport::kStdio;
  if (lower == "streamable-http" || lower == "streamable_http" || lower == "http") {
    return Transport::kStreamableHttp;
  }
  return std::nullopt;
}

void ValidateMcpConfig(const McpConfig &cfg) {
  const bool has_url = cfg.server_url && !cfg.server_url->empty();
  if ((cfg.source == Source::kSelfHosted || cfg.source == Source::kHostedCloud) && !has_url) {
    Fail(ErrorCode::kConfigError,
         std::string(SourceName(cfg.source)) + " mode requires a server URL");
  }
  if (cfg.source == Source::kHostedCloud && (!cfg.access_token || cfg.access_token->empty())) {
    Fail(ErrorCode::kConfigError, "hosted_cloud mode requires an access token");
  }
  if (cfg.timeout_seconds < 1) Fail(ErrorCode::kConfigError, "timeout must be at least 1 s");
  if (cfg.parallelism < 1) Fail(ErrorCode::kConfigError, "parallelism must be at least 1");
  backends::ParseDevice(cfg.device);
}

ToolOutput SplitResult(const std::string &body) {
  compose::Json j;
  try {
    j = compose::Json::parse(body);
  } catch (const compose::Json::exception &e) {
    Fail(ErrorCode::kDecodeError, std::string("invalid result JSON: ") + e.what());
  }
  ToolOutput out;
  if (j.is_object() && j.contains("markdown")) {
    out.markdown = j["markdown"].get<std::string>();
    j.erase("markdown");
  }
  out.json = compose::CanonicalDump(j);
  return out;
}

LocalBackend::LocalBackend(PipelineConfig pipeline, PipelineKind preload, int parallelism,
                           std::chrono::milliseconds wait)
    : pipeline_(std::move(pipeline)), parallelism_(parallelism), wait_(wait) {
  PoolFor(preload);
}

serve::InstancePool &LocalBackend::PoolFor(PipelineKind kind) {
  std::lock_guard lock(mu_);
  if (structure_pool_) return *structure_pool_;
  if (kind == PipelineKind::kOcr && ocr_pool_) return *ocr_pool_;
  auto pool = serve::MakePool(pipeline_, kind, parallelism_, parallelism_ * 4);
  if (kind == PipelineKind::kOcr) {
    ocr_pool_ = std::move(pool);
    return *ocr_pool_;
  }
  structure_pool_ = std::move(pool);
  return *structure_pool_;
}

ToolOutput LocalBackend::Call(PipelineKind kind, const std::vector<uint8_t> &data) {
  const std::string body =
      Json{{IsPdf(data) ? "pdf" : "image", Base64Encode(data)}}.dump();
  const serve::HttpReply reply =
      serve::HandleInference(PoolFor(kind), kind, body, pipeline_.pdf, wait_);
  if (reply.status != 200) Fail(ErrorCode::kEngineFailure, reply.body);
  return SplitResult(reply.body);
}

ToolOutput RemoteBackend::Call(PipelineKind kind, const std::vector<uint8_t> &data) {
  std::string origin = url_;
  std::string prefix;
  const size_t scheme = origin.find("://");
  const size_t slash = origin.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash != std::string::npos) {
    prefix = origin.substr(slash);
    origin.resize(slash);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  if (token_) client.set_bearer_token_auth(*token_);
  const std::string body = Json{{IsPdf(data) ? "pdf" : "image", Base64Encode(data)}}.dump();
  const auto res =
      client.Post(prefix + "/v1/" + std::string(PipelineKindName(kind)), body, "application/json");
  if (!res) {
    Fail(ErrorCode::kClientFailure,
         "cannot reach " + url_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    Fail(ErrorCode::kClientFailure, "server answered HTTP " + std::to_string(res->status) + ": " +
                                        res->body);
  }
  return SplitResult(res->body);
}

McpServer::McpServer(McpConfig cfg, std::shared_ptr<ToolBackend> backend)
    : cfg_(std::move(cfg)), backend_(std::move(backend)) {
  ValidateMcpConfig(cfg_);
}

Json McpServer::ToolList() const {
  return Json::array(
      {{{"name", "ocr"},
        {"description", "Detect and recognize text lines in an image or PDF."},
        {"inputSchema", InputSchema()}},
       {{"name", "structure"},
        {"description",
         "Parse an image or PDF into layout items, returning structured JSON and Markdown."},
        {"inputSchema", InputSchema()}}});
}

Json McpServer::CallTool(const Json &params) {
  const std::string name = params.value("name", "");
  const auto kind = ParsePipelineKind(name);
  if (!kind || name != PipelineKindName(*kind)) {
    Fail(ErrorCode::kConfigError, "unknown tool '" + name + "'");
  }
  const Json args = params.contains("arguments") ? params["arguments"] : Json::object();
  if (!args.is_object()) return ToolError("arguments must be an object");
  for (const auto &[key, _] : args.items()) {
    if (key != "file" && key != "data" && key != "options") {
      return ToolError("unknown argument '" + key + "'");
    }
  }
  if (args.contains("options") && !args["options"].is_object()) {
    return ToolError("options must be an object");
  }
  const bool has_file = args.contains("file");
  const bool has_data = args.contains("data");
  if (has_file == has_data) return ToolError("provide exactly one of \"file\" or \"data\"");
  const Json &input = has_file ? args["file"] : args["data"];
  if (!input.is_string()) return ToolError("input must be a string");

  try {
    std::vector<uint8_t> bytes;
    if (has_file) {
      bytes = ReadBinaryFile(input.get<std::string>());
    } else {
      std::string_view s = input.get_ref<const std::string &>();
      if (s.starts_with("data:") && s.find(',') != std::string_view::npos) {
        s = s.substr(s.find(',') + 1);
      }
      auto decoded = Base64Decode(s);
      if (!decoded) return ToolError("data is not valid base64");
      bytes = std::move(*decoded);
    }
    const ToolOutput out = backend_->Call(*kind, bytes);
    Json content = Json::array({{{"type", "text"}, {"text", out.json}}});
    if (*kind == PipelineKind::kStructure && out.markdown) {
      content.push_back({{"type", "text"}, {"text", *out.markdown}});
    }
    return {{"content", content}, {"isError", false}};
  } catch (const std::exception &e) {
    return ToolError(e.what());
  }
}

std::optional<Json> McpServer::Handle(const Json &msg) {
  if (!msg.is_object() || msg.value("jsonrpc", "") != "2.0" || !msg.contains("method") ||
      !msg["method"].is_string()) {
    const Json id = msg.is_object() && msg.contains("id") ? msg["id"] : Json(nullptr);
    return RpcError(id, kInvalidRequest, "invalid JSON-RPC 2.0 request");
  }
  const std::string method = msg["method"].get<std::string>();
  const bool is_notification = !msg.contains("id");
  const Json id = is_notification ? Json(nullptr) : msg["id"];
  const Json params = msg.contains("params") ? msg["params"] : Json::object();

  if (is_notification) return std::nullopt;
  if (method == "initialize") {
    std::string version = kDefaultProtocolVersion;
    if (params.is_object() && params.contains("protocolVersion") &&
        params["protocolVersion"].is_string()) {
      version = params["protocolVersion"].get<std::string>();
    }
    return RpcResult(id, {{"protocolVersion", version},
                          {"capabilities", {{"tools", {{"listChanged", false}}}}},
                          {"serverInfo", {{"name", "ocrkit"}, {"version", "0.1.0"}}}});
  }
  if (method == "ping") return RpcResult(id, Json::object());
  if (method == "tools/list") return RpcResult(id, {{"tools", ToolList()}});
  if (method == "tools/call") {
    if (!params.is_object()) return RpcError(id, kInvalidParams, "params must be an object");
    try {
      return RpcResult(id, CallTool(params));
    } catch (const Error &e) {
      return RpcError(id, kInvalidParams, e.what());
    }
  }
  return RpcError(id, kMethodNotFound, "method not found: " + method);
}

std::optional<std::string> McpServer::HandleText(std::string_view text) {
  Json msg;
  try {
    msg = Json::parse(text);
  } catch (const Json::exception &) {
    return RpcError(nullptr, kParseError, "parse error").dump();
  }
  const std::optional<Json> reply = Handle(msg);
  if (!reply) return std::nullopt;
  return reply->dump(-1, ' ', false, Json::error_handler_t::replace);
}

void McpServer::ServeStdio(std::istream &in, std::ostream &out) {
  std::string line;
  while (std::getline(in, line)) {
    if (text::Trim(line).empty()) continue;
    if (const auto reply = HandleText(line)) {
      out << *reply << '\n';
      out.flush();
    }
  }
}

void McpServer::Attach(httplib::Server &server) {
  server.Post("/mcp", [this](const httplib::Request &req, httplib::Response &res) {
    Json msg;
    try {
      msg = Json::parse(req.body);
    } catch (const Json::exception &) {
      res.status = 400;
      res.set_content(RpcError(nullptr, kParseError, "parse error").dump(), "application/json");
      return;
    }
    const bool initialize = msg.is_object() && msg.value("method", "") == "initialize";
    if (!initialize && req.has_header("Mcp-Session-Id")) {
      std::lock_guard lock(sessions_mu_);
      if (!sessions_.contains(req.get_header_value("Mcp-Session-Id"))) {
        res.status = 404;
        res.set_content(RpcError(nullptr, kInvalidRequest, "unknown session").dump(),
                        "application/json");
        return;
      }
    }
    const std::optional<Json> reply = Handle(msg);
    if (!reply) {
      res.status = 202;
      return;
    }
    if (initialize && reply->contains("result")) {
      const std::string sid = NewSessionId();
      {
        std::lock_guard lock(sessions_mu_);
        sessions_.insert(sid);
      }
      res.set_header("Mcp-Session-Id", sid);
    }
    res.set_content(reply->dump(-1, ' ', false, Json::error_handler_t::replace),
                    "application/json");
  });
  server.Get("/mcp", [](const httplib::Request &, httplib::Response &res) {
    res.status = 405;
    res.set_content(serve::ErrorBody("method_not_allowed", "server-initiated streams are not offered"),
                    "application/json");
  });
  server.Delete("/mcp", [this](const httplib::Request &req, httplib::Response &res) {
    std::lock_guard lock(sessions_mu_);
    res.status = sessions_.erase(req.get_header_value("Mcp-Session-Id")) ? 200 : 404;
  });
}

std::shared_ptr<ToolBackend> MakeBackend(const McpConfig &cfg, const PipelineConfig &pipeline) {
  ValidateMcpConfig(cfg);
  if (cfg.source != Source::kLocal) {
    return std::make_shared<RemoteBackend>(*cfg.server_url, cfg.access_token, cfg.timeout_seconds);
  }
  PipelineConfig local = pipeline;
  local.backend.device = cfg.device;
  return std::make_shared<LocalBackend>(std::move(local), cfg.pipeline, cfg.parallelism,
                                        std::chrono::seconds(cfg.timeout_seconds));
}

}  // namespace ocrkit::mcp
