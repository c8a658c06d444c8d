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

#include "ocrkit/ocr_pipeline.h"

#include <algorithm>
#include <cmath>

#include "ocrkit/error.h"
#include "ocrkit/parallel.h"

namespace ocrkit::ocr {

using backends::ModelTask;

Image ImageFromTensor(const Tensor &t) {
  const auto &s = t.shape();
  const bool batched = t.rank() == 4 && s[0] == 1;
  if (!(batched || t.rank() == 3) || s.back() != Image::kChannels) {
    Fail(ErrorCode::kShapeMismatch, "image tensor must be [1, H, W, 3] or [H, W, 3]");
  }
  const auto h = static_cast<int>(s[s.size() - 3]);
  const auto w = static_cast<int>(s[s.size() - 2]);
  const auto px = t.u8();
  return Image(w, h, std::vector<uint8_t>(px.begin(), px.end()));
}

Tensor ImageToTensor(const Image &img) {
  return Tensor::U8({1, img.height(), img.width(), Image::kChannels}, img.pixels());
}

Tensor RunImageModel(backends::InferenceSession &session, const backends::ModelDescriptor &model,
                     const Image &img, const std::string &output) {
  TensorMap inputs;
  inputs.emplace("image", ImageToTensor(img));
  TensorMap outputs = session.Run(model, inputs);
  auto it = outputs.find(output);
  if (it == outputs.end()) {
    Fail(ErrorCode::kEngineFailure,
         "model '" + model.name + "' produced no '" + output + "' output");
  }
  return std::move(it->second);
}

Point PreprocessedPage::ToOriginal(Point p) const {
  if (unwarped) {
    if (unwarp_grid) {
      const auto &s = unwarp_grid->shape();
      const auto gh = static_cast<int>(s[0]);
      const auto gw = static_cast<int>(s[1]);
      const auto g = unwarp_grid->ToFloat();
      const double fx = std::clamp(p.x - 0.5, 0.0, static_cast<double>(gw - 1));
      const double fy = std::clamp(p.y - 0.5, 0.0, static_cast<double>(gh - 1));
      const int x0 = static_cast<int>(std::floor(fx));
      const int y0 = static_cast<int>(std::floor(fy));
      const int x1 = std::min(x0 + 1, gw - 1);
      const int y1 = std::min(y0 + 1, gh - 1);
      const double ax = fx - x0;
      const double ay = fy - y0;
      const auto at = [&](int x, int y, int c) {
        return static_cast<double>(g[(static_cast<size_t>(y) * gw + x) * 2 + c]);
      };
      Point out;
      for (int c = 0; c < 2; ++c) {
        const double top = at(x0, y0, c) * (1 - ax) + at(x1, y0, c) * ax;
        const double bot = at(x0, y1, c) * (1 - ax) + at(x1, y1, c) * ax;
        (c == 0 ? out.x : out.y) = top * (1 - ay) + bot * ay;
      }
      p = out;
    } else {
      p.x *= static_cast<double>(corrected_width) / image.width();
      p.y *= static_cast<double>(corrected_height) / image.height();
    }
  }
  return RotatePoint(p, rotation, corrected_width, corrected_height);
}

OcrPipeline::OcrPipeline(OcrConfig cfg, std::shared_ptr<backends::InferenceSession> session)
    : cfg_(std::move(cfg)), session_(std::move(session)) {
  if (!session_) Fail(ErrorCode::kConfigError, "OCR pipeline needs an inference session");
  ValidateDetectionParams(cfg_.detection);
  if (cfg_.parallelism < 1) Fail(ErrorCode::kConfigError, "parallelism must be at least 1");
  const auto require = [&](ModelTask task, const char *why) {
    auto it = cfg_.models.find(task);
    if (it == cfg_.models.end()) {
      Fail(ErrorCode::kConfigError, std::string("no model bound for task '") +
                                        std::string(backends::ModelTaskName(task)) + "' (" +
                                        why + ")");
    }
    backends::ValidateDescriptor(it->second);
  };
  require(ModelTask::kTextDet, "text detection");
  require(ModelTask::kTextRec, "text recognition");
  if (cfg_.use_doc_orientation_classify) {
    require(ModelTask::kDocOrientation, "use_doc_orientation_classify is on");
  }
  if (cfg_.use_doc_unwarping) require(ModelTask::kUnwarp, "use_doc_unwarping is on");
  if (cfg_.use_textline_orientation) {
    require(ModelTask::kLineOrientation, "use_textline_orientation is on");
  }
  charset_ = Charset::FromFile(*Model(ModelTask::kTextRec).charset_path);
}

const backends::ModelDescriptor &OcrPipeline::Model(ModelTask task) const {
  auto it = cfg_.models.find(task);
  if (it == cfg_.models.end()) {
    Fail(ErrorCode::kConfigError,
         "no model bound for task '" + std::string(backends::ModelTaskName(task)) + "'");
  }
  return it->second;
}

Rotation OcrPipeline::ClassifyDocOrientation(const Image &image) const {
  const Tensor scores =
      RunImageModel(*session_, Model(ModelTask::kDocOrientation), image, "scores");
  return DocRotationFromScores(scores.ToFloat());
}

Image OcrPipeline::Unwarp(const Image &image, std::optional<Tensor> *grid) const {
  if (!cfg_.use_doc_unwarping) return image;
  TensorMap inputs;
  inputs.emplace("image", ImageToTensor(image));
  TensorMap outputs = session_->Run(Model(ModelTask::kUnwarp), inputs);
  auto it = outputs.find("image");
  if (it == outputs.end()) {
    Fail(ErrorCode::kEngineFailure, "unwarp model produced no 'image' output");
  }
  Image out = ImageFromTensor(it->second);
  if (grid) {
    auto g = outputs.find("grid");
    if (g != outputs.end()) {
      const auto &s = g->second.shape();
      if (g->second.rank() != 3 || s[0] != out.height() || s[1] != out.width() || s[2] != 2) {
        Fail(ErrorCode::kShapeMismatch, "unwarp grid must be [H, W, 2] of the output image");
      }
      *grid = std::move(g->second);
    }
  }
  return out;
}

PreprocessedPage OcrPipeline::Preprocess(const Image &image) const {
  PreprocessedPage out;
  Image upright = image;
  if (cfg_.use_doc_orientation_classify) {
    out.rotation = ClassifyDocOrientation(image);
    upright = Rotate(image, Inverse(out.rotation));
    out.trace.push_back(kStageDocOrientation);
  }
  out.corrected_width = upright.width();
  out.corrected_height = upright.height();
  if (cfg_.use_doc_unwarping) {
    out.image = Unwarp(upright, &out.unwarp_grid);
    out.unwarped = true;
    out.trace.push_back(kStageUnwarp);
  } else {
    out.image = std::move(upright);
  }
  return out;
}

std::vector<Quad> OcrPipeline::DetectText(const Image &image) const {
  const Tensor prob = RunImageModel(*session_, Model(ModelTask::kTextDet), image, "prob");
  const ProbabilityMap map = ProbabilityMap::FromTensor(prob);
  std::vector<Quad> quads = extract_text_regions(map, cfg_.detection);
  if (map.width() != image.width() || map.height() != image.height()) {
    const double sx = static_cast<double>(image.width()) / map.width();
    const double sy = static_cast<double>(image.height()) / map.height();
    for (Quad &q : quads) {
      for (Point &p : q) p = {p.x * sx, p.y * sy};
    }
  }
  return quads;
}

LineOrientation OcrPipeline::ClassifyLineOrientation(const Image &line) const {
  const Tensor scores =
      RunImageModel(*session_, Model(ModelTask::kLineOrientation), line, "scores");
  return LineOrientationFromScores(scores.ToFloat());
}

RecognizedLine OcrPipeline::RecognizeLine(const Image &line, bool *ran_orientation) const {
  RecognizedLine out;
  const Image *input = &line;
  Image flipped;
  if (cfg_.use_textline_orientation) {
    out.orientation = ClassifyLineOrientation(line);
    if (ran_orientation) *ran_orientation = true;
    if (out.orientation == LineOrientation::kDeg180) {
      flipped = Rotate(line, Rotation::k180);
      input = &flipped;
    }
  }
  const Tensor logits = RunImageModel(*session_, Model(ModelTask::kTextRec), *input, "logits");
  const DecodedText decoded = ctc_greedy_decode(LogitsSequence::FromTensor(logits), charset_);
  out.text = decoded.text;
  out.score = decoded.score;
  return out;
}

std::vector<TextLine> OcrPipeline::ReadText(const Image &image,
                                            std::vector<std::string> *trace) const {
  const std::vector<Quad> quads = DetectText(image);
  if (trace) trace->push_back(kStageTextDet);

  std::vector<std::optional<TextLine>> slots(quads.size());
  ParallelFor(quads.size(), cfg_.parallelism, [&](size_t i) {
    const Image crop = crop_line(image, quads[i]);
    const RecognizedLine rec = RecognizeLine(crop);
    if (rec.text.empty() || rec.score < cfg_.rec_score_thresh) return;
    slots[i] = TextLine{quads[i], rec.text, rec.score, rec.orientation};
  });

  if (trace && !quads.empty()) {
    if (cfg_.use_textline_orientation) trace->push_back(kStageLineOrientation);
    trace->push_back(kStageTextRec);
  }
  std::vector<TextLine> lines;
  for (auto &s : slots) {
    if (s) lines.push_back(std::move(*s));
  }
  return lines;
}

OcrResult OcrPipeline::Run(const Image &image, int page_index) const {
  if (image.empty()) Fail(ErrorCode::kDecodeError, "input image is empty");
  OcrResult result;
  const PreprocessedPage pre = Preprocess(image);
  result.trace = pre.trace;
  result.doc_rotation = pre.rotation;
  std::vector<TextLine> lines = ReadText(pre.image, &result.trace);
  if (pre.rotation != Rotation::k0 || pre.unwarped) {
    for (TextLine &line : lines) {
      for (Point &p : line.geometry) p = pre.ToOriginal(p);
      line.geometry = normalize_quad(line.geometry);
    }
  }
  result.page.index = page_index;
  result.page.width = image.width();
  result.page.height = image.height();
  result.page.text_lines = std::move(lines);
  return result;
}

}  // namespace ocrkit::ocr
