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

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ocrkit/config.h"
#include "ocrkit/processor.h"

namespace httplib {
class Server;
}

namespace ocrkit::serve {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  // 0 binds an ephemeral port.
  int port = 8080;
  PipelineKind pipeline = PipelineKind::kOcr;
  size_t max_body_bytes = 32u << 20;
  int timeout_seconds = 60;
  int parallelism = 1;
  int queue_limit = 8;
};

void ValidateServiceConfig(const ServiceConfig &cfg);
ServiceConfig MakeServiceConfig(const ServingOptions &opts, PipelineKind pipeline);

// N pipeline instances behind a bounded wait queue. A request holds one
// instance for its whole duration.
class InstancePool {
 public:
  class Lease {
   public:
    Lease(InstancePool *pool, size_t index) : pool_(pool), index_(index) {}
    Lease(Lease &&o) noexcept : pool_(std::exchange(o.pool_, nullptr)), index_(o.index_) {}
    Lease(const Lease &) = delete;
    ~Lease() {
      if (pool_) pool_->Release(index_);
    }
    DocumentProcessor &operator*() const { return *pool_->instances_[index_]; }
    DocumentProcessor *operator->() const { return pool_->instances_[index_].get(); }
    size_t index() const { return index_; }

   private:
    InstancePool *pool_;
    size_t index_;
  };

  InstancePool(std::vector<std::unique_ptr<DocumentProcessor>> instances, int queue_limit);

  // nullopt when the wait queue is full or the wait times out.
  std::optional<Lease> Acquire(std::chrono::milliseconds timeout);

  size_t size() const { return instances_.size(); }
  size_t busy() const;
  size_t waiting() const;
  const DocumentProcessor &instance(size_t i) const { return *instances_[i]; }

 private:
  void Release(size_t index);

  std::vector<std::unique_ptr<DocumentProcessor>> instances_;
  int queue_limit_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<size_t> free_;
  size_t waiting_ = 0;
};

std::unique_ptr<InstancePool> MakePool(const PipelineConfig &cfg, PipelineKind kind, int instances,
                                       int queue_limit);

struct HttpReply {
  int status = 200;
  std::string body;
};

// Error body: {"error": {"code": ..., "message": ...}}.
std::string ErrorBody(const std::string &code, const std::string &message);

// Handles a /v1/<pipeline> request body; independent of the HTTP server.
HttpReply HandleInference(InstancePool &pool, PipelineKind kind, const std::string &body,
                          const RasterizerConfig &pdf, std::chrono::milliseconds wait);

class HttpService {
 public:
  HttpService(ServiceConfig cfg, std::shared_ptr<InstancePool> pool, RasterizerConfig pdf = {});
  ~HttpService();

  // Binds and serves on a background thread; returns the bound port.
  int Start();
  // Binds and serves on the calling thread until Stop().
  void Run();
  void Stop();
  int port() const { return port_; }

  // Extra routes (e.g. the MCP endpoint) can be attached before Start().
  httplib::Server &server() { return *server_; }

 private:
  void Bind();

  ServiceConfig cfg_;
  std::shared_ptr<InstancePool> pool_;
  RasterizerConfig pdf_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace ocrkit::serve
