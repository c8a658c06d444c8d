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

#include "ocrkit/processor.h"

#include "ocrkit/compose.h"
#include "ocrkit/error.h"
#include "ocrkit/stub_engine.h"
#include "ocrkit/text.h"

namespace ocrkit {

std::string_view PipelineKindName(PipelineKind k) {
  return k == PipelineKind::kOcr ? "ocr" : "structure";
}

std::optional<PipelineKind> ParsePipelineKind(std::string_view name) {
  const std::string lower = text::AsciiLower(name);
  if (lower == "ocr") return PipelineKind::kOcr;
  if (lower == "structure") return PipelineKind::kStructure;
  return std::nullopt;
}

std::shared_ptr<backends::EngineRegistry> MakeRegistry(const BackendPolicy &policy) {
  return backends::MakeStubRegistry(policy.model_dir);
}

DocumentProcessor::DocumentProcessor(const PipelineConfig &cfg, PipelineKind kind,
                                     std::shared_ptr<const backends::EngineRegistry> registry)
    : kind_(kind), include_header_footer_(cfg.include_header_footer) {
  auto session = std::make_shared<backends::InferenceSession>(std::move(registry),
                                                              MakeEngineConfig(cfg.backend));
  structure::StructureConfig sc = cfg.structure;
  sc.ocr.models = ResolveModels(cfg);
  if (kind == PipelineKind::kOcr) {
    ocr_ = std::make_unique<ocr::OcrPipeline>(sc.ocr, session);
  } else {
    structure_ = std::make_unique<structure::StructurePipeline>(sc, session);
  }
}

ProcessOutput DocumentProcessor::Process(std::span<const Image> pages, PipelineKind kind) const {
  if (!Serves(kind)) {
    Fail(ErrorCode::kConfigError, "this instance does not run the structure pipeline");
  }
  ProcessOutput out;
  for (size_t i = 0; i < pages.size(); ++i) {
    const int index = static_cast<int>(i);
    if (kind == PipelineKind::kStructure) {
      structure::StructureResult r = structure_->Run(pages[i], index);
      out.document.pages.push_back(std::move(r.page));
      out.traces.push_back(std::move(r.trace));
      out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    } else {
      const ocr::OcrPipeline &pipeline = ocr_ ? *ocr_ : structure_->ocr();
      ocr::OcrResult r = pipeline.Run(pages[i], index);
      out.document.pages.push_back(std::move(r.page));
      out.traces.push_back(std::move(r.trace));
    }
  }
  if (kind == PipelineKind::kStructure) {
    out.markdown = compose::emit_markdown(out.document, {include_header_footer_});
  }
  return out;
}

std::string ResultJson(const ProcessOutput &out, PipelineKind kind) {
  compose::Json j = compose::DocumentToJson(out.document);
  if (kind == PipelineKind::kStructure) j["markdown"] = out.markdown;
  return compose::CanonicalDump(j);
}

}  // namespace ocrkit
