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

#include "ocrkit/backend.h"

#include <array>
#include <charconv>

#include "ocrkit/error.h"

namespace ocrkit::backends {
namespace {

constexpr std::array<std::string_view, 13> kTaskNames = {
    "doc_orientation", "unwarp",    "text_det",    "line_orientation", "text_rec",
    "layout",          "region_det", "table_cls",  "table_cell",       "table_struct",
    "formula",         "chart",     "seal"};

constexpr std::array<EngineKind, 4> kGpuPriority = {
    EngineKind::kVendorAccelerated, EngineKind::kNativeGraph,
    EngineKind::kPortableGraph, EngineKind::kStub};
constexpr std::array<EngineKind, 3> kCpuPriority = {
    EngineKind::kPortableGraph, EngineKind::kNativeGraph, EngineKind::kStub};

std::span<const EngineKind> PriorityFor(const Device &d) {
  if (d.kind == Device::Kind::kGpu) return kGpuPriority;
  return kCpuPriority;
}

std::string ShapeString(const std::vector<int64_t> &shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace

std::string_view EngineKindName(EngineKind k) {
  switch (k) {
    case EngineKind::kNativeGraph: return "native_graph";
    case EngineKind::kPortableGraph: return "portable_graph";
    case EngineKind::kVendorAccelerated: return "vendor_accelerated";
    case EngineKind::kStub: return "stub";
  }
  return "?";
}

std::optional<EngineKind> ParseEngineKind(std::string_view name) {
  for (EngineKind k : kAllEngineKinds) {
    if (EngineKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view ArtifactExtension(EngineKind k) {
  switch (k) {
    case EngineKind::kNativeGraph: return ".graph";
    case EngineKind::kPortableGraph: return ".onnx";
    case EngineKind::kVendorAccelerated: return ".engine";
    case EngineKind::kStub: return ".stub";
  }
  return "";
}

std::string_view ModelTaskName(ModelTask t) { return kTaskNames[static_cast<size_t>(t)]; }

std::optional<ModelTask> ParseModelTask(std::string_view name) {
  for (size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == name) return static_cast<ModelTask>(i);
  }
  return std::nullopt;
}

Device ParseDevice(std::string_view text) {
  if (text == "cpu") return {};
  if (text == "gpu") return {Device::Kind::kGpu, 0};
  if (text.starts_with("gpu:")) {
    int idx = -1;
    const auto rest = text.substr(4);
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), idx);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && idx >= 0) {
      return {Device::Kind::kGpu, idx};
    }
  }
  Fail(ErrorCode::kConfigError,
       "invalid device '" + std::string(text) + "' (expected cpu, gpu or gpu:N)");
}

std::string DeviceName(const Device &d) {
  if (d.kind == Device::Kind::kCpu) return "cpu";
  return "gpu:" + std::to_string(d.index);
}

void ValidateDescriptor(const ModelDescriptor &model) {
  if (model.name.empty()) Fail(ErrorCode::kConfigError, "model descriptor has no name");
  if (model.task == ModelTask::kTextRec && !model.charset_path) {
    Fail(ErrorCode::kConfigError,
         "text recognition model '" + model.name + "' needs a charset_path");
  }
}

void EngineRegistry::Register(EngineKind kind, EngineFactory factory) {
  std::lock_guard lock(mu_);
  if (factories_.contains(kind)) {
    Fail(ErrorCode::kDuplicateEngine,
         "engine kind '" + std::string(EngineKindName(kind)) + "' is already registered");
  }
  factories_.emplace(kind, std::move(factory));
}

bool EngineRegistry::Contains(EngineKind kind) const {
  std::lock_guard lock(mu_);
  return factories_.contains(kind);
}

std::set<EngineKind> EngineRegistry::kinds() const {
  std::lock_guard lock(mu_);
  std::set<EngineKind> out;
  for (const auto &[k, _] : factories_) out.insert(k);
  return out;
}

std::unique_ptr<Engine> EngineRegistry::Create(EngineKind kind, const EngineConfig &cfg) const {
  EngineFactory factory;
  {
    std::lock_guard lock(mu_);
    auto it = factories_.find(kind);
    if (it == factories_.end()) {
      Fail(ErrorCode::kNoEngineAvailable,
           "engine kind '" + std::string(EngineKindName(kind)) + "' is not registered");
    }
    factory = it->second;
  }
  auto engine = factory(cfg);
  if (!engine) {
    Fail(ErrorCode::kEngineFailure,
         "factory for '" + std::string(EngineKindName(kind)) + "' returned no engine");
  }
  return engine;
}

void register_engine(EngineRegistry &registry, EngineKind kind, EngineFactory factory) {
  registry.Register(kind, std::move(factory));
}

BackendChoice select_backend(const RuntimeEnv &env, const ModelDescriptor &model,
                             const EngineConfig &cfg) {
  if (cfg.intra_op_threads < 1) {
    Fail(ErrorCode::kConfigError, "intra_op_threads must be at least 1");
  }
  if (env.available.empty()) {
    Fail(ErrorCode::kNoEngineAvailable, "no inference engine is registered");
  }
  const auto hinted = [&](EngineKind k) {
    return model.backend_hints.empty() || model.backend_hints.contains(k);
  };
  const auto priority = PriorityFor(env.device);
  for (EngineKind k : priority) {
    if (env.available.contains(k) && hinted(k)) return {k, std::nullopt};
  }

  std::optional<EngineKind> fallback;
  for (EngineKind k : priority) {
    if (env.available.contains(k)) {
      fallback = k;
      break;
    }
  }
  if (!fallback) fallback = *env.available.begin();
  return {*fallback, "model '" + model.name + "': no registered engine matches its hints on " +
                         DeviceName(env.device) + "; falling back to " +
                         std::string(EngineKindName(*fallback))};
}

TensorMap run(Engine &engine, const ModelDescriptor &model, const TensorMap &inputs) {
  if (!model.input_specs.empty()) {
    for (const TensorSpec &spec : model.input_specs) {
      auto it = inputs.find(spec.name);
      if (it == inputs.end()) {
        Fail(ErrorCode::kShapeMismatch,
             "model '" + model.name + "' is missing input '" + spec.name + "'");
      }
      const Tensor &t = it->second;
      bool ok = t.dtype() == spec.dtype && t.rank() == spec.shape.size();
      for (size_t i = 0; ok && i < spec.shape.size(); ++i) {
        ok = spec.shape[i] == -1 || spec.shape[i] == t.shape()[i];
      }
      if (!ok) {
        Fail(ErrorCode::kShapeMismatch,
             "model '" + model.name + "' input '" + spec.name + "' expects " +
                 std::string(DTypeName(spec.dtype)) + ShapeString(spec.shape) + ", got " +
                 std::string(DTypeName(t.dtype())) + ShapeString(t.shape()));
      }
    }
    for (const auto &[name, _] : inputs) {
      bool known = false;
      for (const TensorSpec &spec : model.input_specs) known = known || spec.name == name;
      if (!known) {
        Fail(ErrorCode::kShapeMismatch,
             "model '" + model.name + "' has no input named '" + name + "'");
      }
    }
  }
  try {
    return engine.Run(model, inputs);
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    Fail(ErrorCode::kEngineFailure, "model '" + model.name + "': " + e.what());
  }
}

Conversion convert_on_demand(const ModelDescriptor &model, EngineKind to) {
  const std::string ext(ArtifactExtension(to));
  if (model.artifact_path.extension() == ext) return {model, std::nullopt};
  std::filesystem::path sibling = model.artifact_path;
  sibling.replace_extension(ext);
  std::error_code ec;
  if (!model.artifact_path.empty() && std::filesystem::exists(sibling, ec)) {
    ModelDescriptor converted = model;
    converted.artifact_path = sibling;
    return {converted, std::nullopt};
  }
  return {model, "model '" + model.name + "': no " + std::string(EngineKindName(to)) +
                     " artifact next to '" + model.artifact_path.string() +
                     "'; using the original"};
}

InferenceSession::InferenceSession(std::shared_ptr<const EngineRegistry> registry,
                                   EngineConfig cfg)
    : registry_(std::move(registry)), cfg_(cfg) {
  if (!registry_) Fail(ErrorCode::kNoEngineAvailable, "session has no engine registry");
  if (cfg_.intra_op_threads < 1) {
    Fail(ErrorCode::kConfigError, "intra_op_threads must be at least 1");
  }
}

EngineKind InferenceSession::SelectedKind(const ModelDescriptor &model) {
  const RuntimeEnv env{cfg_.device, registry_->kinds()};
  const BackendChoice choice = select_backend(env, model, cfg_);
  if (choice.warning) diagnostics_.WarnOnce(*choice.warning);
  return choice.kind;
}

InferenceSession::Slot &InferenceSession::EngineFor(EngineKind kind) {
  std::lock_guard lock(mu_);
  auto it = engines_.find(kind);
  if (it != engines_.end()) return *it->second;
  auto slot = std::make_unique<Slot>();
  slot->engine = registry_->Create(kind, cfg_);
  if (cfg_.fp16 && !slot->engine->supports_fp16()) {
    diagnostics_.Warn("engine '" + std::string(EngineKindName(kind)) +
                      "' has no FP16 support; running in F32");
  }
  return *engines_.emplace(kind, std::move(slot)).first->second;
}

TensorMap InferenceSession::Run(const ModelDescriptor &model, const TensorMap &inputs) {
  const EngineKind kind = SelectedKind(model);
  ModelDescriptor resolved = model;
  if (kind != EngineKind::kStub) {
    Conversion conv = convert_on_demand(model, kind);
    if (conv.warning) diagnostics_.WarnOnce(*conv.warning);
    resolved = std::move(conv.model);
  }
  Slot &slot = EngineFor(kind);
  if (slot.engine->concurrent_safe()) return run(*slot.engine, resolved, inputs);
  std::lock_guard lock(slot.run_mu);
  return run(*slot.engine, resolved, inputs);
}

}  // namespace ocrkit::backends
