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

#include "ocrkit/stub_engine.h"

#include <cstdio>

#include "ocrkit/error.h"

namespace ocrkit::backends {
namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr uint64_t kFnvPrime = 0x100000001b3ull;

void Mix(uint64_t &h, const void *data, size_t n) {
  const auto *p = static_cast<const unsigned char *>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

}  // namespace

std::string FixtureKey(const TensorMap &inputs) {
  uint64_t h = kFnvOffset;
  for (const auto &[name, t] : inputs) {
    const uint64_t len = name.size();
    Mix(h, &len, sizeof len);
    Mix(h, name.data(), name.size());
    const auto dtype = static_cast<uint32_t>(t.dtype());
    Mix(h, &dtype, sizeof dtype);
    const uint64_t rank = t.rank();
    Mix(h, &rank, sizeof rank);
    for (int64_t d : t.shape()) Mix(h, &d, sizeof d);
    Mix(h, t.bytes().data(), t.bytes().size());
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

StubEngine::StubEngine(std::filesystem::path root) : root_(std::move(root)) {}

TensorMap StubEngine::Run(const ModelDescriptor &model, const TensorMap &inputs) {
  const std::string key = FixtureKey(inputs);
  const auto dir = root_ / model.name / key;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    Fail(ErrorCode::kEngineFailure,
         "stub engine has no fixture for model '" + model.name + "' (key " + key + ")");
  }
  TensorMap out;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".tensor") continue;
    out.emplace(entry.path().stem().string(), ReadTensorFile(entry.path()));
  }
  if (out.empty()) {
    Fail(ErrorCode::kEngineFailure,
         "fixture for model '" + model.name + "' (key " + key + ") has no tensors");
  }
  return out;
}

void StubEngine::Record(const std::filesystem::path &root, const std::string &model_name,
                        const TensorMap &inputs, const TensorMap &outputs) {
  const auto dir = root / model_name / FixtureKey(inputs);
  std::filesystem::create_directories(dir);
  for (const auto &[name, t] : outputs) WriteTensorFile(t, dir / (name + ".tensor"));
}

EngineFactory StubFactory(std::filesystem::path root) {
  return [root = std::move(root)](const EngineConfig &) {
    return std::make_unique<StubEngine>(root);
  };
}

std::shared_ptr<EngineRegistry> MakeStubRegistry(const std::filesystem::path &root) {
  auto registry = std::make_shared<EngineRegistry>();
  registry->Register(EngineKind::kStub, StubFactory(root));
  return registry;
}

}  // namespace ocrkit::backends
