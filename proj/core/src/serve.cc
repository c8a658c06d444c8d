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

#include "ocrkit/serve.h"

#include <algorithm>

#include "httplib.h"
#include "json.hpp"
#include "ocrkit/base64.h"
#include "ocrkit/error.h"
#include "ocrkit/input.h"

namespace ocrkit::serve {
namespace {

using nlohmann::json;

std::string_view StripDataUrl(std::string_view s) {
  if (s.starts_with("data:")) {
    const size_t comma = s.find(',');
    if (comma != std::string_view::npos) return s.substr(comma + 1);
  }
  return s;
}

}  // namespace

void ValidateServiceConfig(const ServiceConfig &cfg) {
  if (cfg.port < 0 || cfg.port > 65535) Fail(ErrorCode::kConfigError, "port out of range");
  if (cfg.parallelism < 1) Fail(ErrorCode::kConfigError, "parallelism must be at least 1");
  if (cfg.queue_limit < 0) Fail(ErrorCode::kConfigError, "queue limit must be non-negative");
  if (cfg.max_body_bytes == 0) Fail(ErrorCode::kConfigError, "max body size must be positive");
  if (cfg.timeout_seconds < 1) Fail(ErrorCode::kConfigError, "timeout must be at least 1 s");
}

ServiceConfig MakeServiceConfig(const ServingOptions &opts, PipelineKind pipeline) {
  ServiceConfig cfg;
  cfg.host = opts.host;
  cfg.port = opts.port;
  cfg.pipeline = pipeline;
  cfg.max_body_bytes = opts.max_body_bytes;
  cfg.timeout_seconds = opts.timeout_seconds;
  cfg.parallelism = opts.parallelism;
  cfg.queue_limit = opts.queue_limit;
  return cfg;
}

InstancePool::InstancePool(std::vector<std::unique_ptr<DocumentProcessor>> instances,
                           int queue_limit)
    : instances_(std::move(instances)), queue_limit_(queue_limit) {
  if (instances_.empty()) Fail(ErrorCode::kConfigError, "pool needs at least one instance");
  for (size_t i = instances_.size(); i-- > 0;) free_.push_back(i);
}

std::optional<InstancePool::Lease> InstancePool::Acquire(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (free_.empty()) {
    if (waiting_ >= static_cast<size_t>(queue_limit_)) return std::nullopt;
    ++waiting_;
    const bool ready = cv_.wait_for(lock, timeout, [&] { return !free_.empty(); });
    --waiting_;
    if (!ready) return std::nullopt;
  }
  const size_t index = free_.back();
  free_.pop_back();
  return Lease(this, index);
}

void InstancePool::Release(size_t index) {
  {
    std::lock_guard lock(mu_);
    free_.push_back(index);
  }
  cv_.notify_one();
}

size_t InstancePool::busy() const {
  std::lock_guard lock(mu_);
  return instances_.size() - free_.size();
}

size_t InstancePool::waiting() const {
  std::lock_guard lock(mu_);
  return waiting_;
}

std::unique_ptr<InstancePool> MakePool(const PipelineConfig &cfg, PipelineKind kind, int instances,
                                       int queue_limit) {
  if (instances < 1) Fail(ErrorCode::kConfigError, "parallelism must be at least 1");
  const auto registry = MakeRegistry(cfg.backend);
  std::vector<std::unique_ptr<DocumentProcessor>> procs;
  for (int i = 0; i < instances; ++i) {
    procs.push_back(std::make_unique<DocumentProcessor>(cfg, kind, registry));
  }
  return std::make_unique<InstancePool>(std::move(procs), queue_limit);
}

std::string ErrorBody(const std::string &code, const std::string &message) {
  return json{{"error", {{"code", code}, {"message", message}}}}.dump(
      -1, ' ', false, json::error_handler_t::replace);
}

HttpReply HandleInference(InstancePool &pool, PipelineKind kind, const std::string &body,
                          const RasterizerConfig &pdf, std::chrono::milliseconds wait) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception &) {
    return {400, ErrorBody("bad_request", "body is not valid JSON")};
  }
  if (!req.is_object()) return {400, ErrorBody("bad_request", "body must be a JSON object")};
  const bool has_image = req.contains("image");
  const bool has_pdf = req.contains("pdf");
  if (has_image == has_pdf) {
    return {400, ErrorBody("bad_request", "provide exactly one of \"image\" or \"pdf\"")};
  }
  const json &payload = has_image ? req["image"] : req["pdf"];
  if (!payload.is_string()) return {400, ErrorBody("bad_request", "payload must be a string")};
  const auto bytes = Base64Decode(StripDataUrl(payload.get_ref<const std::string &>()));
  if (!bytes) return {400, ErrorBody("bad_request", "payload is not valid base64")};
  if (has_pdf && !IsPdf(*bytes)) return {422, ErrorBody("undecodable_input", "payload is not a PDF")};

  std::vector<Image> pages;
  try {
    pages = LoadPagesFromBytes(*bytes, pdf);
  } catch (const Error &e) {
    return {422, ErrorBody("undecodable_input", e.what())};
  }

  std::optional<InstancePool::Lease> lease = pool.Acquire(wait);
  if (!lease) return {503, ErrorBody("overloaded", "all pipeline instances are busy")};
  if (!(*lease)->Serves(kind)) {
    return {404, ErrorBody("not_found", "this service does not run the structure pipeline")};
  }
  try {
    return {200, ResultJson((*lease)->Process(pages, kind), kind)};
  } catch (const Error &e) {
    return {500, ErrorBody(std::string(ErrorCodeName(e.code())), e.what())};
  } catch (const std::exception &e) {
    return {500, ErrorBody("internal", e.what())};
  }
}

HttpService::HttpService(ServiceConfig cfg, std::shared_ptr<InstancePool> pool,
                         RasterizerConfig pdf)
    : cfg_(std::move(cfg)), pool_(std::move(pool)), pdf_(std::move(pdf)),
      server_(std::make_unique<httplib::Server>()) {
  ValidateServiceConfig(cfg_);
  httplib::Server &srv = *server_;
  srv.set_payload_max_length(cfg_.max_body_bytes);
  srv.set_read_timeout(cfg_.timeout_seconds);
  srv.set_write_timeout(cfg_.timeout_seconds);
  srv.new_task_queue = [n = cfg_.parallelism + cfg_.queue_limit + 2] {
    return new httplib::ThreadPool(static_cast<size_t>(n));
  };

  srv.Get("/health", [this](const httplib::Request &, httplib::Response &res) {
    const json body = {{"status", "ok"},
                       {"pipeline", std::string(PipelineKindName(cfg_.pipeline))},
                       {"instances", pool_->size()},
                       {"busy", pool_->busy()},
                       {"queued", pool_->waiting()}};
    res.set_content(body.dump(), "application/json");
  });
  for (PipelineKind kind : {PipelineKind::kOcr, PipelineKind::kStructure}) {
    const std::string path = "/v1/" + std::string(PipelineKindName(kind));
    srv.Post(path, [this, kind](const httplib::Request &req, httplib::Response &res) {
      const HttpReply reply = HandleInference(*pool_, kind, req.body, pdf_,
                                              std::chrono::seconds(cfg_.timeout_seconds));
      res.status = reply.status;
      if (reply.status == 503) res.set_header("Retry-After", "1");
      res.set_content(reply.body, "application/json");
    });
  }
  srv.set_error_handler([](const httplib::Request &, httplib::Response &res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    std::string code = "http_" + std::to_string(res.status);
    if (res.status == 404) code = "not_found";
    if (res.status == 413) code = "payload_too_large";
    if (res.status == 400) code = "bad_request";
    res.set_content(ErrorBody(code, httplib::status_message(res.status)), "application/json");
    return httplib::Server::HandlerResponse::Handled;
  });
  srv.set_exception_handler([](const httplib::Request &, httplib::Response &res,
                               std::exception_ptr ep) {
    std::string message = "unexpected failure";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception &e) {
      message = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(ErrorBody("internal", message), "application/json");
  });
}

HttpService::~HttpService() { Stop(); }

void HttpService::Bind() {
  if (cfg_.port == 0) {
    port_ = server_->bind_to_any_port(cfg_.host);
  } else {
    port_ = server_->bind_to_port(cfg_.host, cfg_.port) ? cfg_.port : -1;
  }
  if (port_ <= 0) {
    Fail(ErrorCode::kIoError, "cannot bind " + cfg_.host + ":" + std::to_string(cfg_.port));
  }
}

int HttpService::Start() {
  Bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpService::Run() {
  Bind();
  server_->listen_after_bind();
}

void HttpService::Stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace ocrkit::serve
