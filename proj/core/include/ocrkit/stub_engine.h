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
#include <memory>
#include <string>

#include "ocrkit/backend.h"

namespace ocrkit::backends {

// Content key of an input map: FNV-1a 64 over names, dtypes, shapes and data
// in name order, as 16 lowercase hex digits.
std::string FixtureKey(const TensorMap &inputs);

// Replays recorded outputs. Fixtures live at
//   <root>/<model name>/<FixtureKey(inputs)>/<output name>.tensor
class StubEngine final : public Engine {
 public:
  explicit StubEngine(std::filesystem::path root);

  EngineKind kind() const override { return EngineKind::kStub; }
  TensorMap Run(const ModelDescriptor &model, const TensorMap &inputs) override;

  static void Record(const std::filesystem::path &root, const std::string &model_name,
                     const TensorMap &inputs, const TensorMap &outputs);

 private:
  std::filesystem::path root_;
};

EngineFactory StubFactory(std::filesystem::path root);
std::shared_ptr<EngineRegistry> MakeStubRegistry(const std::filesystem::path &root);

}  // namespace ocrkit::backends
