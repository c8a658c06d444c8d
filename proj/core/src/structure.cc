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

#include "ocrkit/structure.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ocrkit/compose.h"
#include "ocrkit/error.h"
#include "ocrkit/items.h"
#include "ocrkit/parallel.h"

namespace ocrkit::structure {
namespace {

using backends::ModelTask;

BBox PixelBox(const BBox &b, const Image &img) {
  return {std::clamp(std::floor(b.x0), 0.0, static_cast<double>(img.width())),
          std::clamp(std::floor(b.y0), 0.0, static_cast<double>(img.height())),
          std::clamp(std::ceil(b.x1), 0.0, static_cast<double>(img.width())),
          std::clamp(std::ceil(b.y1), 0.0, static_cast<double>(img.height()))};
}

Image Crop(const Image &img, const BBox &px) {
  return CropBox(img, static_cast<int>(px.x0), static_cast<int>(px.y0), static_cast<int>(px.x1),
                 static_cast<int>(px.y1));
}

std::string JoinLines(std::vector<const TextLine *> lines, layout::OrderMode mode) {
  std::stable_sort(lines.begin(), lines.end(), [mode](const TextLine *a, const TextLine *b) {
    const BBox ba = bounding_box(a->geometry);
    const BBox bb = bounding_box(b->geometry);
    if (mode == layout::OrderMode::kVertical) {
      if (ba.x1 != bb.x1) return ba.x1 > bb.x1;
      return ba.y0 < bb.y0;
    }
    if (ba.y0 != bb.y0) return ba.y0 < bb.y0;
    return ba.x0 < bb.x0;
  });
  std::string out;
  for (const TextLine *l : lines) {
    if (!out.empty()) out += ' ';
    out += l->text;
  }
  return out;
}

ItemContent TextualContent(Category c, std::string text) {
  switch (c) {
    case Category::kTitle: return TitleContent{std::move(text), 1};
    case Category::kCaption: return CaptionContent{std::move(text)};
    case Category::kSealText: return SealContent{std::move(text)};
    default: return TextContent{std::move(text)};
  }
}

}  // namespace

std::vector<layout::RawDetection> DecodeDetections(const Tensor &boxes) {
  const std::vector<float> v = boxes.ToFloat();
  if (v.empty()) return {};
  if (boxes.rank() != 2 || boxes.shape()[1] != 6) {
    Fail(ErrorCode::kShapeMismatch, "detections must have shape [N, 6]");
  }
  std::vector<layout::RawDetection> out;
  for (size_t i = 0; i + 6 <= v.size(); i += 6) {
    const int cls = static_cast<int>(std::lround(v[i + 5]));
    if (cls < 0 || cls >= kCategoryCount) {
      Fail(ErrorCode::kShapeMismatch, "detection class " + std::to_string(cls) + " is unknown");
    }
    out.push_back({{v[i], v[i + 1], v[i + 2], v[i + 3]},
                   static_cast<Category>(cls),
                   std::clamp(static_cast<double>(v[i + 4]), 0.0, 1.0)});
  }
  return out;
}

StructurePipeline::StructurePipeline(StructureConfig cfg,
                                     std::shared_ptr<backends::InferenceSession> session)
    : cfg_(std::move(cfg)), session_(session), ocr_(cfg_.ocr, session) {
  layout::ValidateLayoutParams(cfg_.layout);
  layout::ValidateLayoutParams(cfg_.region);
  layout::ValidateCutParams(cfg_.cut);
  if (cfg_.order_mode != "auto" && !layout::ParseOrderMode(cfg_.order_mode)) {
    Fail(ErrorCode::kConfigError, "order_mode must be auto, horizontal or vertical");
  }
  std::vector<ModelTask> required = {ModelTask::kLayout};
  if (cfg_.use_region_detection) required.push_back(ModelTask::kRegionDet);
  if (cfg_.use_table_recognition) {
    required.insert(required.end(),
                    {ModelTask::kTableCls, ModelTask::kTableCell, ModelTask::kTableStruct});
  }
  if (cfg_.use_formula_recognition) required.push_back(ModelTask::kFormula);
  if (cfg_.use_chart_recognition) required.push_back(ModelTask::kChart);
  if (cfg_.use_seal_recognition) required.push_back(ModelTask::kSeal);
  for (ModelTask t : required) {
    if (!cfg_.ocr.models.contains(t)) {
      Fail(ErrorCode::kConfigError,
           "no model bound for task '" + std::string(backends::ModelTaskName(t)) + "'");
    }
  }
}

const backends::ModelDescriptor &StructurePipeline::Model(ModelTask task) const {
  return cfg_.ocr.models.at(task);
}

std::string StructurePipeline::RecognizeTable(const Image &page, const BBox &box,
                                              const std::vector<TextLine> &lines,
                                              Diagnostics &diag) const {
  const BBox px = PixelBox(box, page);
  const Image crop = Crop(page, px);
  TensorMap cls = session_->Run(Model(ModelTask::kTableCls), {{"image", ocr::ImageToTensor(crop)}});
  if (!cls.contains("orientation") || !cls.contains("frame")) {
    Fail(ErrorCode::kEngineFailure, "table classifier must output 'orientation' and 'frame'");
  }
  const items::TableRoute route =
      items::route_table(cls.at("orientation").ToFloat(), cls.at("frame").ToFloat());
  const Image upright = items::UprightTable(crop, route);

  const Tensor cells_t = ocr::RunImageModel(*session_, Model(ModelTask::kTableCell), upright, "boxes");
  const std::vector<float> cv = cells_t.ToFloat();
  std::vector<BBox> cells;
  if (!cv.empty()) {
    if (cells_t.rank() != 2 || cells_t.shape()[1] < 4) {
      Fail(ErrorCode::kShapeMismatch, "cell boxes must have shape [N, 4+]");
    }
    const size_t stride = static_cast<size_t>(cells_t.shape()[1]);
    for (size_t i = 0; i + stride <= cv.size(); i += stride) {
      cells.push_back({cv[i], cv[i + 1], cv[i + 2], cv[i + 3]});
    }
  }
  const Tensor tokens_t =
      ocr::RunImageModel(*session_, Model(ModelTask::kTableStruct), upright, "tokens");
  const items::StructureTokens tokens = items::TokensFromIds(tokens_t.i64());

  std::vector<TextLine> table_lines;
  if (route.orientation == Rotation::k0) {
    for (const TextLine &l : lines) {
      if (coverage(bounding_box(l.geometry), px) < items::kCellMinOverlap) continue;
      TextLine shifted = l;
      for (Point &p : shifted.geometry) p = {p.x - px.x0, p.y - px.y0};
      table_lines.push_back(std::move(shifted));
    }
  } else {
    table_lines = ocr_.ReadText(upright, nullptr);
  }
  return items::assemble_table_html(tokens, cells, table_lines, &diag);
}

std::string StructurePipeline::RecognizeSeal(const Image &page, const BBox &box) const {
  const BBox px = PixelBox(box, page);
  const Image crop = Crop(page, px);
  const Tensor polys = ocr::RunImageModel(*session_, Model(ModelTask::kSeal), crop, "polygons");
  const std::vector<float> v = polys.ToFloat();
  if (v.empty()) return "";
  if (polys.rank() != 3 || polys.shape()[2] != 2) {
    Fail(ErrorCode::kShapeMismatch, "seal polygons must have shape [P, K, 2]");
  }
  const size_t k = static_cast<size_t>(polys.shape()[1]);
  std::string text;
  for (size_t off = 0; off + 2 * k <= v.size(); off += 2 * k) {
    Polygon poly;
    for (size_t j = 0; j < k; ++j) poly.push_back({v[off + 2 * j], v[off + 2 * j + 1]});
    const ocr::RecognizedLine line = ocr_.RecognizeLine(items::rectify_seal_text(poly, crop));
    if (line.text.empty()) continue;
    if (!text.empty()) text += ' ';
    text += line.text;
  }
  return text;
}

StructureResult StructurePipeline::Run(const Image &image, int page_index) const {
  if (image.empty()) Fail(ErrorCode::kDecodeError, "input image is empty");
  StructureResult result;
  Diagnostics diag;
  const ocr::PreprocessedPage pre = ocr_.Preprocess(image);
  result.trace = pre.trace;
  const Image &page = pre.image;
  std::vector<TextLine> lines = ocr_.ReadText(page, &result.trace);

  result.trace.push_back(kStageLayout);
  std::vector<LayoutBlock> blocks = layout::postprocess_layout(
      DecodeDetections(ocr::RunImageModel(*session_, Model(ModelTask::kLayout), page, "boxes")),
      cfg_.layout);

  result.order_mode = cfg_.order_mode == "auto" ? layout::DetectOrderMode(lines)
                                                : *layout::ParseOrderMode(cfg_.order_mode);
  std::vector<layout::RawDetection> regions;
  if (cfg_.use_region_detection) {
    result.trace.push_back(kStageRegion);
    for (const LayoutBlock &r : layout::postprocess_layout(
             DecodeDetections(
                 ocr::RunImageModel(*session_, Model(ModelTask::kRegionDet), page, "boxes")),
             cfg_.region)) {
      regions.push_back({r.bbox, r.category, r.score});
    }
  }
  blocks = layout::assign_regions(std::move(blocks), regions, result.order_mode, cfg_.cut);
  const std::vector<size_t> order =
      layout::recover_reading_order(blocks, result.order_mode, cfg_.cut);

  // Each line belongs to the block covering most of it, at least half.
  std::vector<std::vector<const TextLine *>> block_lines(blocks.size());
  for (const TextLine &l : lines) {
    const BBox lb = bounding_box(l.geometry);
    double best = 0.0;
    int owner = -1;
    for (size_t rank = 0; rank < order.size(); ++rank) {
      const double c = coverage(lb, blocks[order[rank]].bbox);
      if (c > best) {
        best = c;
        owner = static_cast<int>(order[rank]);
      }
    }
    if (owner >= 0 && best >= 0.5) block_lines[owner].push_back(&l);
  }

  std::vector<DocumentItem> items(order.size());
  std::mutex trace_mu;
  std::vector<bool> stage_ran(4, false);
  ParallelFor(order.size(), cfg_.ocr.parallelism, [&](size_t rank) {
    const LayoutBlock &b = blocks[order[rank]];
    DocumentItem &it = items[rank];
    it.category = b.category;
    it.bbox = b.bbox;
    it.page_index = page_index;
    it.order_index = static_cast<int>(rank);
    it.region_id = b.region_id;
    const std::string plain = JoinLines(block_lines[order[rank]], result.order_mode);
    const auto mark = [&](int stage) {
      std::lock_guard lock(trace_mu);
      stage_ran[stage] = true;
    };
    it.content = TextualContent(b.category, plain);
    try {
      switch (b.category) {
        case Category::kTable:
          if (cfg_.use_table_recognition) {
            mark(0);
            it.content = TableContent{RecognizeTable(page, b.bbox, lines, diag)};
          }
          break;
        case Category::kFormula:
          if (cfg_.use_formula_recognition) {
            mark(1);
            it.content = FormulaContent{items::recognize_formula(
                *session_, Model(ModelTask::kFormula), Crop(page, PixelBox(b.bbox, page)))};
          }
          break;
        case Category::kChart:
          if (cfg_.use_chart_recognition) {
            mark(2);
            it.content = ChartContent{items::chart_to_table(
                *session_, Model(ModelTask::kChart), Crop(page, PixelBox(b.bbox, page)))};
            break;
          }
          [[fallthrough]];
        case Category::kImage:
          it.content = ImageContent{
              compose::ImageCropName(page_index, it.order_index),
              std::make_shared<const Image>(Crop(page, PixelBox(b.bbox, page)))};
          break;
        case Category::kSealText:
          if (cfg_.use_seal_recognition) {
            mark(3);
            it.content = SealContent{RecognizeSeal(page, b.bbox)};
          }
          break;
        default:
          break;
      }
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kStructureMismatch && e.code() != ErrorCode::kFormulaInvalid &&
          e.code() != ErrorCode::kChartInvalid && e.code() != ErrorCode::kDegenerateGeometry) {
        throw;
      }
      diag.Warn(std::string(CategoryName(b.category)) + " item " + std::to_string(rank) +
                " fell back to plain text: " + e.what());
      it.content = TextContent{plain};
    }
  });
  const char *stage_names[] = {kStageTable, kStageFormula, kStageChart, kStageSeal};
  for (int s = 0; s < 4; ++s) {
    if (stage_ran[s]) result.trace.push_back(stage_names[s]);
  }

  compose::ApplyCaptionLinks(items, compose::link_captions(items));

  if (pre.rotation != Rotation::k0 || pre.unwarped) {
    for (TextLine &line : lines) {
      for (Point &p : line.geometry) p = pre.ToOriginal(p);
      line.geometry = normalize_quad(line.geometry);
    }
    for (DocumentItem &it : items) {
      Quad q = quad_from_box(it.bbox);
      for (Point &p : q) p = pre.ToOriginal(p);
      it.bbox = bounding_box(q);
    }
  }
  result.page.index = page_index;
  result.page.width = image.width();
  result.page.height = image.height();
  result.page.items = std::move(items);
  result.page.text_lines = std::move(lines);
  result.warnings = diag.warnings();
  for (const std::string &w : session_->diagnostics().warnings()) result.warnings.push_back(w);
  return result;
}

}  // namespace ocrkit::structure
