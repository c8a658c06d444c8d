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


#include "synthetic.h"

#include <algorithm>
#include <map>

#include "ocrkit/config.h"
#include "ocrkit/error.h"
#include "ocrkit/items.h"
#include "ocrkit/ocr_pipeline.h"
#include "ocrkit/processor.h"
#include "ocrkit/stub_engine.h"
#include "ocrkit/text.h"

namespace ocrkit::testing {

namespace fs = std::filesystem;
using backends::ModelTask;

namespace {

constexpr int kGrayBase = 20;
constexpr int kGrayStep = 2;

bool IsGray(const Image &img, int x, int y) {
  const uint8_t r = img.at(x, y, 0);
  return r < 250 && r == img.at(x, y, 1) && r == img.at(x, y, 2);
}

int ClassForGray(uint8_t v) {
  if (v < kGrayBase || (v - kGrayBase) % kGrayStep != 0) return -1;
  const int c = (v - kGrayBase) / kGrayStep;
  if (c < 1 || c > static_cast<int>(SyntheticGraphemes().size())) return -1;
  return c;
}

int Width(const BBox &b) { return static_cast<int>(b.x1 - b.x0); }
int Height(const BBox &b) { return static_cast<int>(b.y1 - b.y0); }

}  // namespace

const std::vector<std::string> &SyntheticGraphemes() {
  static const std::vector<std::string> graphemes = [] {
    const std::string chars =
        " abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.,:;!?-()%&<>'/=+";
    std::vector<std::string> out;
    for (char c : chars) out.emplace_back(1, c);
    return out;
  }();
  return graphemes;
}

ocr::Charset SyntheticCharset() { return ocr::Charset(SyntheticGraphemes()); }

uint8_t GrayForClass(int class_index) {
  return static_cast<uint8_t>(kGrayBase + kGrayStep * class_index);
}

int TextWidth(std::string_view text) {
  const size_t n = text::CodePointCount(text);
  return n == 0 ? 0 : static_cast<int>(n) * kGlyphPitch - (kGlyphPitch - kGlyphWidth);
}

void DrawText(Image &img, int x, int y, std::string_view s) {
  const auto &g = SyntheticGraphemes();
  for (const std::string &cp : text::SplitCodePoints(s)) {
    const auto it = std::find(g.begin(), g.end(), cp);
    if (it == g.end()) Fail(ErrorCode::kConfigError, "glyph '" + cp + "' is not drawable");
    const uint8_t v = GrayForClass(static_cast<int>(it - g.begin()) + 1);
    img.Fill({static_cast<double>(x), static_cast<double>(y), static_cast<double>(x + kGlyphWidth),
              static_cast<double>(y + kGlyphHeight)},
             v, v, v);
    x += kGlyphPitch;
  }
}

BBox TextBlockBox(int x, int y, const std::vector<std::string> &lines) {
  int w = 0;
  for (const std::string &l : lines) w = std::max(w, TextWidth(l));
  const int n = static_cast<int>(lines.size());
  return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(x + 12 + w),
          static_cast<double>(y + 12 + kLinePitch * (n - 1) + kGlyphHeight)};
}

std::vector<BBox> SceneItem::CellBoxes() const {
  std::vector<BBox> out;
  const double cw = static_cast<double>(Width(bbox)) / table.cols;
  const double rh = static_cast<double>(Height(bbox)) / table.rows;
  for (int r = 0; r < table.rows; ++r) {
    for (int c = 0; c < table.cols; ++c) out.push_back({c * cw, r * rh, (c + 1) * cw, (r + 1) * rh});
  }
  return out;
}

std::vector<int64_t> SceneItem::TableTokenIds() const {
  std::vector<int64_t> ids = {items::kTokTableOpen};
  for (int r = 0; r < table.rows; ++r) {
    ids.push_back(items::kTokRowOpen);
    for (int c = 0; c < table.cols; ++c) {
      ids.push_back(items::kTokCellOpen);
      ids.push_back(items::kTokCellClose);
    }
    ids.push_back(items::kTokRowClose);
  }
  ids.push_back(items::kTokTableClose);
  return ids;
}

namespace {

// Top-left corner of the seal text in crop coordinates.
std::pair<int, int> SealTextOrigin(const SceneItem &it) {
  return {(Width(it.bbox) - TextWidth(it.seal_text)) / 2, (Height(it.bbox) - kGlyphHeight) / 2};
}

}  // namespace

Polygon SceneItem::SealBand() const {
  const auto [tx, ty] = SealTextOrigin(*this);
  const double x0 = tx - 3;
  const double x1 = tx + TextWidth(seal_text) + 3;
  const double xm = (x0 + x1) / 2;
  const double y0 = ty - 3;
  const double y1 = ty + kGlyphHeight + 3;
  return {{x0, y0}, {xm, y0}, {x1, y0}, {x1, y1}, {xm, y1}, {x0, y1}};
}

Scene TwoColumnScene() {
  Scene s;
  const auto text_item = [](Category c, int x, int y, std::vector<std::string> lines) {
    SceneItem it;
    it.category = c;
    it.bbox = TextBlockBox(x, y, lines);
    it.lines = std::move(lines);
    return it;
  };
  s.items.push_back(text_item(Category::kHeader, 30, 10, {"ocrkit synthetic page"}));
  SceneItem title = text_item(Category::kTitle, 30, 40, {"Quarterly Field Report"});
  title.bbox.x1 = 570;
  s.items.push_back(title);

  // Left column.
  s.items.push_back(text_item(Category::kText, 30, 80,
                              {"Rain fell on most of the", "northern plots this season.",
                               "Yields held steady overall."}));
  SceneItem figure;
  figure.category = Category::kImage;
  figure.bbox = {30, 150, 270, 290};
  s.items.push_back(figure);
  s.items.push_back(text_item(Category::kCaption, 30, 300, {"Figure 1: plot layout"}));
  SceneItem chart;
  chart.category = Category::kChart;
  chart.bbox = {30, 340, 270, 450};
  chart.payload = "| Year | Tons |\n| --- | ---: |\n| 2024 | 410 |\n| 2025 | 438 |";
  s.items.push_back(chart);
  s.items.push_back(text_item(Category::kText, 30, 470, {"Lab: North Station"}));

  // Right column.
  s.items.push_back(text_item(Category::kText, 320, 80,
                              {"The table lists plot totals", "in kilograms."}));
  SceneItem table;
  table.category = Category::kTable;
  table.bbox = {320, 130, 570, 196};
  table.table = {3, 2, {"Plot", "Yield", "North", "420", "South & East", "<380>"}};
  s.items.push_back(table);
  s.items.push_back(text_item(Category::kText, 320, 216, {"Season: Spring 2025"}));
  SceneItem formula;
  formula.category = Category::kFormula;
  formula.bbox = {320, 260, 560, 300};
  formula.payload = "E = m c^{2}";
  s.items.push_back(formula);

  SceneItem seal;
  seal.category = Category::kSealText;
  seal.bbox = {440, 600, 570, 650};
  seal.seal_text = "APPROVED";
  s.items.push_back(seal);
  s.items.push_back(text_item(Category::kFooter, 30, 770, {"page 1"}));

  s.regions = {{20, 70, 280, 520}, {310, 70, 580, 310}};
  return s;
}

Image RenderScene(const Scene &scene) {
  Image img(scene.width, scene.height, 255);
  for (const SceneItem &it : scene.items) {
    const BBox &b = it.bbox;
    const int x0 = static_cast<int>(b.x0);
    const int y0 = static_cast<int>(b.y0);
    switch (it.category) {
      case Category::kImage:
        for (int y = y0; y < static_cast<int>(b.y1); ++y) {
          for (int x = x0; x < static_cast<int>(b.x1); ++x) {
            img.at(x, y, 0) = static_cast<uint8_t>(100 + (x - x0) % 50);
            img.at(x, y, 1) = static_cast<uint8_t>(60 + (y - y0) % 40);
            img.at(x, y, 2) = 200;
          }
        }
        break;
      case Category::kChart:
        for (int bar = 0; bar < 4; ++bar) {
          const double bx = b.x0 + 20 + bar * 50;
          img.Fill({bx, b.y1 - 20 - 18 * (bar + 1), bx + 30, b.y1 - 10}, 230, 140, 30);
        }
        break;
      case Category::kFormula:
        img.Fill({b.x0 + 10, b.y0 + 17, b.x1 - 10, b.y0 + 22}, 30, 160, 60);
        img.Fill({b.x0 + 40, b.y0 + 5, b.x0 + 50, b.y1 - 5}, 30, 160, 60);
        break;
      case Category::kTable: {
        const std::vector<BBox> cells = it.CellBoxes();
        for (size_t i = 0; i < cells.size(); ++i) {
          const BBox c{cells[i].x0 + b.x0, cells[i].y0 + b.y0, cells[i].x1 + b.x0,
                       cells[i].y1 + b.y0};
          img.Fill({c.x0, c.y0, c.x1, c.y0 + 1}, 40, 40, 220);
          img.Fill({c.x0, c.y1 - 1, c.x1, c.y1}, 40, 40, 220);
          img.Fill({c.x0, c.y0, c.x0 + 1, c.y1}, 40, 40, 220);
          img.Fill({c.x1 - 1, c.y0, c.x1, c.y1}, 40, 40, 220);
          DrawText(img, static_cast<int>(c.x0) + 6,
                   static_cast<int>(c.y0 + (c.height() - kGlyphHeight) / 2), it.table.cells[i]);
        }
        break;
      }
      case Category::kSealText: {
        img.Fill({b.x0, b.y0, b.x1, b.y0 + 2}, 200, 30, 30);
        img.Fill({b.x0, b.y1 - 2, b.x1, b.y1}, 200, 30, 30);
        img.Fill({b.x0, b.y0, b.x0 + 2, b.y1}, 200, 30, 30);
        img.Fill({b.x1 - 2, b.y0, b.x1, b.y1}, 200, 30, 30);
        const auto [tx, ty] = SealTextOrigin(it);
        DrawText(img, x0 + tx, y0 + ty, it.seal_text);
        break;
      }
      default:
        for (size_t i = 0; i < it.lines.size(); ++i) {
          DrawText(img, x0 + 6, y0 + 6 + kLinePitch * static_cast<int>(i), it.lines[i]);
        }
    }
  }
  return img;
}

Tensor SyntheticProbabilityMap(const Image &img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<float> prob(static_cast<size_t>(w) * h, 0.0f);
  constexpr int kMaxGap = 3;
  for (int y = 0; y < h; ++y) {
    int last = -1;
    for (int x = 0; x < w; ++x) {
      if (!IsGray(img, x, y)) continue;
      if (last >= 0 && x - last - 1 <= kMaxGap) {
        for (int k = last + 1; k < x; ++k) prob[static_cast<size_t>(y) * w + k] = 1.0f;
      }
      prob[static_cast<size_t>(y) * w + x] = 1.0f;
      last = x;
    }
  }
  return Tensor::F32({1, 1, h, w}, prob);
}

Tensor SyntheticLogits(const Image &crop) {
  std::vector<int> classes;
  const int y = crop.height() / 2;
  int x = 0;
  while (x < crop.width()) {
    if (!IsGray(crop, x, y)) {
      ++x;
      continue;
    }
    std::map<int, int> votes;
    int len = 0;
    for (; x < crop.width() && IsGray(crop, x, y); ++x, ++len) {
      const int c = ClassForGray(crop.at(x, y, 0));
      if (c > 0) ++votes[c];
    }
    if (len < 2 || votes.empty()) continue;
    const auto best = std::max_element(votes.begin(), votes.end(), [](const auto &a, const auto &b) {
      return a.second < b.second;
    });
    classes.push_back(best->first);
  }
  const int n_classes = static_cast<int>(SyntheticGraphemes().size()) + 1;
  const int steps = std::max<int>(1, 2 * static_cast<int>(classes.size()));
  const float other = 0.1f / static_cast<float>(n_classes - 1);
  std::vector<float> values(static_cast<size_t>(steps) * n_classes, other);
  for (int t = 0; t < steps; ++t) {
    const int cls = (t % 2 == 0 && t / 2 < static_cast<int>(classes.size())) ? classes[t / 2] : 0;
    values[static_cast<size_t>(t) * n_classes + cls] = 0.9f;
  }
  return Tensor::F32({1, steps, n_classes}, values);
}

const SceneItem *SyntheticEngine::ItemWithSize(const Image &crop, Category c) const {
  for (const SceneItem &it : scene_.items) {
    if (it.category == c && Width(it.bbox) == crop.width() && Height(it.bbox) == crop.height()) {
      return &it;
    }
  }
  return nullptr;
}

TensorMap SyntheticEngine::Run(const backends::ModelDescriptor &model, const TensorMap &inputs) {
  const Image img = ocr::ImageFromTensor(inputs.at("image"));
  const auto f32 = [](std::vector<int64_t> shape, std::vector<float> v) {
    return Tensor::F32(std::move(shape), v);
  };
  const auto none = [&](const char *kind) -> TensorMap {
    Fail(ErrorCode::kEngineFailure, std::string("synthetic engine has no ") + kind + " of size " +
                                        std::to_string(img.width()) + "x" +
                                        std::to_string(img.height()));
  };
  switch (model.task) {
    case ModelTask::kDocOrientation:
      return {{"scores", f32({1, 4}, {0.94f, 0.02f, 0.02f, 0.02f})}};
    case ModelTask::kUnwarp:
      return {{"image", inputs.at("image")}};
    case ModelTask::kTextDet:
      return {{"prob", SyntheticProbabilityMap(img)}};
    case ModelTask::kLineOrientation:
      return {{"scores", f32({1, 2}, {0.97f, 0.03f})}};
    case ModelTask::kTextRec:
      return {{"logits", SyntheticLogits(img)}};
    case ModelTask::kLayout:
    case ModelTask::kRegionDet: {
      std::vector<float> v;
      if (img.width() == scene_.width && img.height() == scene_.height) {
        if (model.task == ModelTask::kLayout) {
          for (const SceneItem &it : scene_.items) {
            v.insert(v.end(), {static_cast<float>(it.bbox.x0), static_cast<float>(it.bbox.y0),
                               static_cast<float>(it.bbox.x1), static_cast<float>(it.bbox.y1),
                               0.95f, static_cast<float>(it.category)});
          }
        } else {
          for (const BBox &r : scene_.regions) {
            v.insert(v.end(), {static_cast<float>(r.x0), static_cast<float>(r.y0),
                               static_cast<float>(r.x1), static_cast<float>(r.y1), 0.9f,
                               static_cast<float>(Category::kOther)});
          }
        }
      }
      return {{"boxes", f32({static_cast<int64_t>(v.size() / 6), 6}, v)}};
    }
    case ModelTask::kTableCls:
      return {{"orientation", f32({1, 4}, {0.91f, 0.03f, 0.03f, 0.03f})},
              {"frame", f32({1, 2}, {0.8f, 0.2f})}};
    case ModelTask::kTableCell: {
      const SceneItem *it = ItemWithSize(img, Category::kTable);
      if (!it) return none("table");
      std::vector<float> v;
      for (const BBox &b : it->CellBoxes()) {
        v.insert(v.end(), {static_cast<float>(b.x0), static_cast<float>(b.y0),
                           static_cast<float>(b.x1), static_cast<float>(b.y1)});
      }
      return {{"boxes", f32({static_cast<int64_t>(v.size() / 4), 4}, v)}};
    }
    case ModelTask::kTableStruct: {
      const SceneItem *it = ItemWithSize(img, Category::kTable);
      if (!it) return none("table");
      const std::vector<int64_t> ids = it->TableTokenIds();
      return {{"tokens", Tensor::I64({1, static_cast<int64_t>(ids.size())}, ids)}};
    }
    case ModelTask::kFormula:
    case ModelTask::kChart: {
      const Category c = model.task == ModelTask::kFormula ? Category::kFormula : Category::kChart;
      const SceneItem *it = ItemWithSize(img, c);
      if (!it) return none(c == Category::kFormula ? "formula" : "chart");
      return {{"text", Tensor::Text(it->payload)}};
    }
    case ModelTask::kSeal: {
      const SceneItem *it = ItemWithSize(img, Category::kSealText);
      if (!it) return none("seal");
      std::vector<float> v;
      const Polygon band = it->SealBand();
      for (const Point &p : band) v.insert(v.end(), {static_cast<float>(p.x), static_cast<float>(p.y)});
      return {{"polygons", f32({1, static_cast<int64_t>(band.size()), 2}, v)}};
    }
  }
  Fail(ErrorCode::kEngineFailure, "synthetic engine does not handle this task");
}

TensorMap RecordingEngine::Run(const backends::ModelDescriptor &model, const TensorMap &inputs) {
  TensorMap out = inner_->Run(model, inputs);
  backends::StubEngine::Record(root_, model.name, inputs, out);
  return out;
}

std::shared_ptr<backends::InferenceSession> SessionFor(std::shared_ptr<backends::Engine> engine) {
  auto registry = std::make_shared<backends::EngineRegistry>();
  registry->Register(backends::EngineKind::kStub, [engine](const backends::EngineConfig &) {
    return std::make_unique<SharedEngine>(engine);
  });
  return std::make_shared<backends::InferenceSession>(registry, backends::EngineConfig{});
}

namespace {

void WriteCharset(const fs::path &path) {
  std::string charset;
  for (const std::string &g : SyntheticGraphemes()) charset += g + "\n";
  WriteTextFile(path, charset);
}

}  // namespace

ocr::ModelBindings SyntheticBindings(const fs::path &dir) {
  fs::create_directories(dir);
  WriteCharset(dir / "charset.txt");
  ocr::ModelBindings out;
  for (int t = 0; t <= static_cast<int>(ModelTask::kSeal); ++t) {
    const auto task = static_cast<ModelTask>(t);
    backends::ModelDescriptor m;
    m.name = std::string(backends::ModelTaskName(task));
    m.task = task;
    if (task == ModelTask::kTextRec) m.charset_path = dir / "charset.txt";
    out[task] = m;
  }
  return out;
}

Image GenerateFixtures(const Scene &scene, const fs::path &model_dir) {
  fs::create_directories(model_dir);
  for (int t = 0; t <= static_cast<int>(ModelTask::kSeal); ++t) {
    fs::create_directories(model_dir / std::string(backends::ModelTaskName(static_cast<ModelTask>(t))));
  }
  WriteCharset(model_dir / "charset.txt");

  auto inner = std::make_shared<SyntheticEngine>(scene);
  auto registry = std::make_shared<backends::EngineRegistry>();
  registry->Register(backends::EngineKind::kStub, [inner, model_dir](const backends::EngineConfig &) {
    return std::make_unique<RecordingEngine>(inner, model_dir);
  });

  const Image page = RenderScene(scene);
  PipelineConfig cfg;
  cfg.backend.model_dir = model_dir;
  cfg.structure.ocr.use_doc_orientation_classify = true;
  cfg.structure.ocr.use_doc_unwarping = true;
  cfg.structure.ocr.use_textline_orientation = true;
  DocumentProcessor(cfg, PipelineKind::kStructure, registry)
      .Process(std::span(&page, 1), PipelineKind::kStructure);
  return page;
}

std::string SceneItemText(const SceneItem &item) {
  std::string out;
  for (const std::string &l : item.lines) {
    if (!out.empty()) out += ' ';
    out += l;
  }
  return out;
}

}  // namespace ocrkit::testing
