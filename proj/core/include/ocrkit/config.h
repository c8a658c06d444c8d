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

#include <filesystem>
#include <string>

#include "ocrkit/backend.h"
#include "ocrkit/input.h"
#include "ocrkit/kie.h"
#include "ocrkit/structure.h"

namespace ocrkit {

struct BackendPolicy {
  std::string device = "cpu";
  bool fp16 = false;
  int threads = 1;
  // Directory holding model artifacts; also the stub engine's fixture root.
  std::filesystem::path model_dir = "models";
};

struct ServingOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  size_t max_body_bytes = 32u << 20;
  int timeout_seconds = 60;
  int parallelism = 1;
  // Requests allowed to wait for an instance before the service answers 503.
  int queue_limit = 8;
};

struct KieSettings {
  size_t max_chars = 512;
  size_t overlap = 64;
  int top_k = 5;
  bool use_mllm = false;
  kie::ClientConfig chat{"chat_bot", "", "", "mock", "", 60};
  kie::ClientConfig mllm{"mllm_chat_bot", "", "", "mock", "", 60};
  kie::ClientConfig retriever{"retriever", "", "", "mock", "", 60};
};

struct PipelineConfig {
  structure::StructureConfig structure;
  BackendPolicy backend;
  ServingOptions serving;
  KieSettings kie;
  RasterizerConfig pdf;
  bool include_header_footer = false;
  // Task entries given explicitly in the file; everything else is discovered
  // under backend.model_dir.
  ocr::ModelBindings explicit_models;
};

inline constexpr int kConfigSchemaVersion = 1;

// Parses a YAML configuration on top of the built-in defaults. Unknown keys,
// wrong types and out-of-range values raise ConfigError naming the key and
// its line.
PipelineConfig load_config(const std::filesystem::path &path);
PipelineConfig ParseConfig(const std::string &yaml, const std::filesystem::path &base_dir = {},
                           const std::string &source_name = "<config>");

// Binds every task whose artifact (file "<task>.<ext>" or fixture directory
// "<task>") exists under `model_dir`. Text recognition picks up
// "<model_dir>/charset.txt".
ocr::ModelBindings DiscoverModels(const std::filesystem::path &model_dir);

// Discovered models overlaid with the explicit ones.
ocr::ModelBindings ResolveModels(const PipelineConfig &cfg);

backends::EngineConfig MakeEngineConfig(const BackendPolicy &policy);

// Parses "True"/"False"/"true"/"false"; anything else is nullopt.
std::optional<bool> ParseBool(std::string_view s);

}  // namespace ocrkit
