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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrkit/config.h"
#include "ocrkit/document.h"

namespace ocrkit {

enum class PipelineKind { kOcr, kStructure };

std::string_view PipelineKindName(PipelineKind k);
// Case-insensitive "ocr" / "structure".
std::optional<PipelineKind> ParsePipelineKind(std::string_view name);

struct ProcessOutput {
  Document document;
  std::string markdown;
  std::vector<std::vector<std::string>> traces;
  std::vector<std::string> warnings;
};

// Registry with every engine this build can construct for the given policy.
std::shared_ptr<backends::EngineRegistry> MakeRegistry(const BackendPolicy &policy);

// One pipeline instance with its own inference session. A Structure
// processor can also answer OCR requests.
class DocumentProcessor {
 public:
  DocumentProcessor(const PipelineConfig &cfg, PipelineKind kind,
                    std::shared_ptr<const backends::EngineRegistry> registry);

  ProcessOutput Process(std::span<const Image> pages, PipelineKind kind) const;
  bool Serves(PipelineKind kind) const {
    return kind == PipelineKind::kOcr || kind_ == PipelineKind::kStructure;
  }
  PipelineKind kind() const { return kind_; }

 private:
  PipelineKind kind_;
  bool include_header_footer_;
  std::unique_ptr<ocr::OcrPipeline> ocr_;
  std::unique_ptr<structure::StructurePipeline> structure_;
};

// Canonical result body: the document JSON, plus "markdown" for Structure.
std::string ResultJson(const ProcessOutput &out, PipelineKind kind);

}  // namespace ocrkit
