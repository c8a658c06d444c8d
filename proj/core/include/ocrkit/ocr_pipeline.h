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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ocrkit/backend.h"
#include "ocrkit/document.h"
#include "ocrkit/image.h"
#include "ocrkit/ocr.h"

namespace ocrkit::ocr {

using ModelBindings = std::map<backends::ModelTask, backends::ModelDescriptor>;

struct OcrConfig {
  bool use_doc_orientation_classify = false;
  bool use_doc_unwarping = false;
  bool use_textline_orientation = false;
  DetectionParams detection;
  // Lines whose recognition score falls below this are dropped.
  double rec_score_thresh = 0.0;
  ModelBindings models;
  int parallelism = 1;
};

// Stage names recorded in OcrResult::trace, in pipeline order.
inline constexpr const char *kStageDocOrientation = "doc_orientation";
inline constexpr const char *kStageUnwarp = "unwarp";
inline constexpr const char *kStageTextDet = "text_det";
inline constexpr const char *kStageLineOrientation = "line_orientation";
inline constexpr const char *kStageTextRec = "text_rec";

struct OcrResult {
  Page page;
  std::vector<std::string> trace;
  Rotation doc_rotation = Rotation::k0;
};

// Upright (and optionally unwarped) page plus the mapping back to the input.
struct PreprocessedPage {
  Image image;
  Rotation rotation = Rotation::k0;
  int corrected_width = 0;
  int corrected_height = 0;
  bool unwarped = false;
  // Optional [H, W, 2] source coordinates for each unwarped pixel.
  std::optional<Tensor> unwarp_grid;
  std::vector<std::string> trace;

  Point ToOriginal(Point p) const;
};

struct RecognizedLine {
  std::string text;
  double score = 0.0;
  LineOrientation orientation = LineOrientation::kDeg0;
};

Image ImageFromTensor(const Tensor &t);
Tensor ImageToTensor(const Image &img);

class OcrPipeline {
 public:
  OcrPipeline(OcrConfig cfg, std::shared_ptr<backends::InferenceSession> session);

  OcrResult Run(const Image &image, int page_index = 0) const;

  Rotation ClassifyDocOrientation(const Image &image) const;
  Image Unwarp(const Image &image, std::optional<Tensor> *grid = nullptr) const;
  PreprocessedPage Preprocess(const Image &image) const;

  // Detection + per-line recognition on an already upright image; geometry
  // stays in that image's coordinates.
  std::vector<TextLine> ReadText(const Image &image, std::vector<std::string> *trace) const;
  std::vector<Quad> DetectText(const Image &image) const;
  LineOrientation ClassifyLineOrientation(const Image &line) const;
  RecognizedLine RecognizeLine(const Image &line, bool *ran_orientation = nullptr) const;

  const OcrConfig &config() const { return cfg_; }
  const Charset &charset() const { return charset_; }
  backends::InferenceSession &session() const { return *session_; }

 private:
  const backends::ModelDescriptor &Model(backends::ModelTask task) const;

  OcrConfig cfg_;
  std::shared_ptr<backends::InferenceSession> session_;
  Charset charset_;
};

// Single-output helper: runs `model` on {"image": img} and returns `output`.
Tensor RunImageModel(backends::InferenceSession &session, const backends::ModelDescriptor &model,
                     const Image &img, const std::string &output);

}  // namespace ocrkit::ocr
