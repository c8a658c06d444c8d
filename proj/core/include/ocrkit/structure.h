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
#include <string>
#include <vector>

#include "ocrkit/backend.h"
#include "ocrkit/document.h"
#include "ocrkit/layout.h"
#include "ocrkit/ocr_pipeline.h"

namespace ocrkit::structure {

struct StructureConfig {
  ocr::OcrConfig ocr;
  bool use_region_detection = true;
  bool use_table_recognition = true;
  bool use_formula_recognition = true;
  bool use_chart_recognition = true;
  bool use_seal_recognition = true;
  layout::LayoutParams layout;
  layout::LayoutParams region;
  layout::CutParams cut;
  // "auto" picks the mode from the text line aspect ratios.
  std::string order_mode = "auto";
};

inline constexpr const char *kStageLayout = "layout";
inline constexpr const char *kStageRegion = "region_det";
inline constexpr const char *kStageTable = "table";
inline constexpr const char *kStageFormula = "formula";
inline constexpr const char *kStageChart = "chart";
inline constexpr const char *kStageSeal = "seal";

struct StructureResult {
  Page page;
  std::vector<std::string> trace;
  std::vector<std::string> warnings;
  layout::OrderMode order_mode = layout::OrderMode::kHorizontal;
};

// Decodes a layout or region model's [N, 6] (x0, y0, x1, y1, score, class)
// output; class indices follow the Category enumeration.
std::vector<layout::RawDetection> DecodeDetections(const Tensor &boxes);

class StructurePipeline {
 public:
  StructurePipeline(StructureConfig cfg, std::shared_ptr<backends::InferenceSession> session);

  StructureResult Run(const Image &image, int page_index = 0) const;

  const StructureConfig &config() const { return cfg_; }
  const ocr::OcrPipeline &ocr() const { return ocr_; }

 private:
  const backends::ModelDescriptor &Model(backends::ModelTask task) const;
  std::string RecognizeTable(const Image &page, const BBox &box,
                             const std::vector<TextLine> &lines, Diagnostics &diag) const;
  std::string RecognizeSeal(const Image &page, const BBox &box) const;

  StructureConfig cfg_;
  std::shared_ptr<backends::InferenceSession> session_;
  ocr::OcrPipeline ocr_;
};

}  // namespace ocrkit::structure
