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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ocrkit/diagnostics.h"
#include "ocrkit/tensor.h"

namespace ocrkit::backends {

enum class EngineKind { kNativeGraph, kPortableGraph, kVendorAccelerated, kStub };

inline constexpr EngineKind kAllEngineKinds[] = {
    EngineKind::kNativeGraph, EngineKind::kPortableGraph,
    EngineKind::kVendorAccelerated, EngineKind::kStub};

std::string_view EngineKindName(EngineKind k);
std::optional<EngineKind> ParseEngineKind(std::string_view name);
// Artifact file extension that identifies a model converted for `k`.
std::string_view ArtifactExtension(EngineKind k);

enum class ModelTask {
  kDocOrientation,
  kUnwarp,
  kTextDet,
  kLineOrientation,
  kTextRec,
  kLayout,
  kRegionDet,
  kTableCls,
  kTableCell,
  kTableStruct,
  kFormula,
  kChart,
  kSeal,
};

std::string_view ModelTaskName(ModelTask t);
std::optional<ModelTask> ParseModelTask(std::string_view name);

struct Device {
  enum class Kind { kCpu, kGpu };
  Kind kind = Kind::kCpu;
  int index = 0;

  friend bool operator==(const Device &, const Device &) = default;
};

// Accepts "cpu", "gpu" and "gpu:N".
Device ParseDevice(std::string_view text);
std::string DeviceName(const Device &d);

struct EngineConfig {
  bool fp16 = false;
  int intra_op_threads = 1;
  Device device;
};

// Dimension -1 matches any size.
struct TensorSpec {
  std::string name;
  DType dtype = DType::kF32;
  std::vector<int64_t> shape;
};

struct ModelDescriptor {
  std::string name;
  ModelTask task = ModelTask::kTextDet;
  std::vector<TensorSpec> input_specs;
  std::filesystem::path artifact_path;
  std::optional<std::filesystem::path> charset_path;
  std::set<EngineKind> backend_hints;
};

// Throws ConfigError when the descriptor breaks an invariant.
void ValidateDescriptor(const ModelDescriptor &model);

class Engine {
 public:
  virtual ~Engine() = default;
  virtual EngineKind kind() const = 0;
  virtual bool supports_fp16() const { return false; }
  // False means callers must serialize Run calls on this instance.
  virtual bool concurrent_safe() const { return true; }
  virtual TensorMap Run(const ModelDescriptor &model, const TensorMap &inputs) = 0;
};

using EngineFactory = std::function<std::unique_ptr<Engine>(const EngineConfig &)>;

class EngineRegistry {
 public:
  void Register(EngineKind kind, EngineFactory factory);
  bool Contains(EngineKind kind) const;
  std::set<EngineKind> kinds() const;
  std::unique_ptr<Engine> Create(EngineKind kind, const EngineConfig &cfg) const;

 private:
  mutable std::mutex mu_;
  std::map<EngineKind, EngineFactory> factories_;
};

void register_engine(EngineRegistry &registry, EngineKind kind, EngineFactory factory);

struct RuntimeEnv {
  Device device;
  std::set<EngineKind> available;
};

struct BackendChoice {
  EngineKind kind = EngineKind::kStub;
  std::optional<std::string> warning;

  friend bool operator==(const BackendChoice &, const BackendChoice &) = default;
};

// Fixed priority table, intersected with the model's hints. An empty hint set
// places no constraint. Falls back to any registered kind with a warning.
BackendChoice select_backend(const RuntimeEnv &env, const ModelDescriptor &model,
                             const EngineConfig &cfg);

// Checks inputs against model.input_specs, then runs the engine.
TensorMap run(Engine &engine, const ModelDescriptor &model, const TensorMap &inputs);

struct Conversion {
  ModelDescriptor model;
  std::optional<std::string> warning;
};

// Resolves the artifact pre-converted for `to` (same stem, the kind's
// extension). Keeps the original descriptor when no such sibling exists.
Conversion convert_on_demand(const ModelDescriptor &model, EngineKind to);

// Creates engines lazily and routes each model to its selected backend.
class InferenceSession {
 public:
  InferenceSession(std::shared_ptr<const EngineRegistry> registry, EngineConfig cfg);

  TensorMap Run(const ModelDescriptor &model, const TensorMap &inputs);
  EngineKind SelectedKind(const ModelDescriptor &model);

  const EngineConfig &config() const { return cfg_; }
  Diagnostics &diagnostics() { return diagnostics_; }

 private:
  struct Slot {
    std::unique_ptr<Engine> engine;
    std::mutex run_mu;
  };
  Slot &EngineFor(EngineKind kind);

  std::shared_ptr<const EngineRegistry> registry_;
  EngineConfig cfg_;
  std::mutex mu_;
  std::map<EngineKind, std::unique_ptr<Slot>> engines_;
  Diagnostics diagnostics_;
};

}  // namespace ocrkit::backends
