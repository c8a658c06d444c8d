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


#include <algorithm>
#include <functional>
#include <map>

#include "doctest.h"
#include "ocrkit/ocr.h"
#include "ocrkit/ocr_pipeline.h"
#include "oracles.h"
#include "synthetic.h"
#include "test_util.h"

namespace ocrkit::ocr {
namespace {

using backends::ModelTask;
using testing::ErrorOf;

ProbabilityMap MapWith(int w, int h, const std::vector<BBox> &rects, float value = 1.0f) {
  std::vector<float> v(static_cast<size_t>(w) * h, 0.0f);
  for (const BBox &r : rects) {
    for (int y = static_cast<int>(r.y0); y < static_cast<int>(r.y1); ++y) {
      for (int x = static_cast<int>(r.x0); x < static_cast<int>(r.x1); ++x) {
        v[static_cast<size_t>(y) * w + x] = value;
      }
    }
  }
  return ProbabilityMap(w, h, std::move(v));
}

LogitsSequence OneHot(const std::vector<int> &ids, int classes) {
  LogitsSequence l;
  l.steps = static_cast<int>(ids.size());
  l.classes = classes;
  l.values.assign(ids.size() * classes, 0.05f);
  for (size_t t = 0; t < ids.size(); ++t) l.values[t * classes + ids[t]] = 0.8f;
  return l;
}

TEST_CASE("extract_text_regions examples") {
  const DetectionParams p;
  CHECK(extract_text_regions(MapWith(64, 48, {}), p).empty());

  const BBox rect{10, 20, 50, 32};
  const auto regions = find_text_regions(MapWith(64, 48, {rect}), p);
  REQUIRE(regions.size() == 1);
  CHECK(iou(bounding_box(regions[0].raw), rect) >= 0.95);
  CHECK(regions[0].score == doctest::Approx(1.0));

  const auto two = extract_text_regions(MapWith(80, 80, {{5, 50, 60, 60}, {5, 5, 60, 15}}), p);
  REQUIRE(two.size() == 2);
  CHECK(two[0][0].y < two[1][0].y);
}

TEST_CASE("extract_text_regions applies score, size and count limits") {
  DetectionParams p;
  CHECK(extract_text_regions(MapWith(64, 48, {{10, 10, 40, 20}}, 0.5f), p).empty());
  p.box_score_thresh = 0.4;
  CHECK(extract_text_regions(MapWith(64, 48, {{10, 10, 40, 20}}, 0.5f), p).size() == 1);

  DetectionParams tiny;
  tiny.unclip_ratio = 0.0;
  CHECK(extract_text_regions(MapWith(64, 48, {{10, 10, 12, 30}}), tiny).empty());

  std::vector<BBox> many;
  for (int i = 0; i < 10; ++i) many.push_back({5.0 + 12 * i, 5, 13.0 + 12 * i, 15});
  DetectionParams cap;
  cap.max_candidates = 4;
  cap.unclip_ratio = 0.0;
  CHECK(extract_text_regions(MapWith(128, 32, many), cap).size() == 4);
  CHECK(ErrorOf([] {
          DetectionParams bad;
          bad.bin_thresh = 1.5;
          ValidateDetectionParams(bad);
        }) == ErrorCode::kConfigError);
}

TEST_CASE("every kept region scores at least box_score_thresh") {
  testing::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<float> v(40 * 30);
    for (float &x : v) x = static_cast<float>(testing::Uniform(rng, 0, 1));
    const ProbabilityMap map(40, 30, v);
    DetectionParams p;
    p.max_candidates = 5;
    const auto regions = find_text_regions(map, p);
    CHECK(regions.size() <= 5);
    for (const TextRegion &r : regions) CHECK(r.score >= p.box_score_thresh);
  }
}

TEST_CASE("crop_line") {
  Image page(40, 20, 255);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 40; ++x) page.at(x, y, 0) = static_cast<uint8_t>(x * 5 + y);
  }
  const Image plain = crop_line(page, quad_from_box({4, 3, 24, 11}));
  CHECK(plain == CropBox(page, 4, 3, 24, 11));

  // A tall region reads as vertical text and comes back rotated.
  const Image tall = crop_line(page, quad_from_box({2, 1, 8, 19}));
  CHECK(tall.width() == 18);
  CHECK(tall.height() == 6);

  const Quad flat = {Point{1, 1}, Point{5, 1}, Point{5, 1}, Point{1, 1}};
  CHECK(ErrorOf([&] { crop_line(page, flat); }) == ErrorCode::kDegenerateGeometry);
}

TEST_CASE("ctc_greedy_decode examples") {
  const Charset cs({"a", "c", "t"});
  CHECK(ctc_greedy_decode(OneHot({0, 0}, 4), cs).text.empty());
  CHECK(ctc_greedy_decode(OneHot({0, 0}, 4), cs).score == 1.0);
  CHECK(ctc_greedy_decode(OneHot({1, 1, 0, 1}, 4), cs).text == "aa");
  CHECK(ctc_greedy_decode(OneHot({2, 1, 1, 3}, 4), cs).text == "cat");
  const DecodedText d = ctc_greedy_decode(OneHot({2, 1, 1, 3}, 4), cs);
  CHECK(d.score == doctest::Approx(0.8));
  CHECK(ErrorOf([&] { ctc_greedy_decode(OneHot({1}, 5), cs); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("ctc decoding with raw logits uses softmax probabilities") {
  const Charset cs({"a"});
  LogitsSequence l{1, 2, {0.0f, 2.0f}};
  const DecodedText d = ctc_greedy_decode(l, cs);
  CHECK(d.text == "a");
  CHECK(d.score == doctest::Approx(std::exp(2.0) / (1.0 + std::exp(2.0))));
}

TEST_CASE("ctc properties: matches collapse oracle, no blanks, bounded length, blank injection") {
  const Charset cs({"x", "y", "z"});
  testing::Rng rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> ids(testing::UniformInt(rng, 0, 12));
    for (int &id : ids) id = testing::UniformInt(rng, 0, 3);
    const DecodedText d = ctc_greedy_decode(OneHot(ids, 4), cs);
    CHECK(d.text == testing::CtcCollapseOracle(ids, cs));
    CHECK(d.text.size() <= ids.size());
    CHECK(std::find(d.class_ids.begin(), d.class_ids.end(), 0) == d.class_ids.end());
    std::vector<int> padded;
    for (size_t i = 0; i < ids.size(); ++i) {
      padded.push_back(ids[i]);
      if (i + 1 < ids.size() && ids[i] != ids[i + 1]) padded.push_back(0);
    }
    CHECK(ctc_greedy_decode(OneHot(padded, 4), cs).text == d.text);
  }
}

TEST_CASE("orientation classifiers take the argmax with ties to the lower class") {
  CHECK(DocRotationFromScores(std::vector<float>{0.9f, 0.03f, 0.04f, 0.03f}) == Rotation::k0);
  CHECK(DocRotationFromScores(std::vector<float>{0.1f, 0.7f, 0.1f, 0.1f}) == Rotation::k90);
  CHECK(DocRotationFromScores(std::vector<float>{0.25f, 0.25f, 0.25f, 0.25f}) == Rotation::k0);
  CHECK(LineOrientationFromScores(std::vector<float>{0.95f, 0.05f}) == LineOrientation::kDeg0);
  CHECK(LineOrientationFromScores(std::vector<float>{0.2f, 0.8f}) == LineOrientation::kDeg180);
  CHECK(LineOrientationFromScores(std::vector<float>{0.5f, 0.5f}) == LineOrientation::kDeg0);
}

// The synthetic engine with per-task overrides.
class ScriptedEngine : public backends::Engine {
 public:
  using Override = std::function<std::optional<TensorMap>(const TensorMap &)>;
  explicit ScriptedEngine(testing::Scene scene) : inner_(std::move(scene)) {}
  backends::EngineKind kind() const override { return backends::EngineKind::kStub; }
  TensorMap Run(const backends::ModelDescriptor &m, const TensorMap &in) override {
    if (auto it = overrides.find(m.task); it != overrides.end()) {
      if (auto out = it->second(in)) return *out;
    }
    return inner_.Run(m, in);
  }
  std::map<ModelTask, Override> overrides;

 private:
  testing::SyntheticEngine inner_;
};

struct Rig {
  testing::TempDir dir;
  std::shared_ptr<ScriptedEngine> engine =
      std::make_shared<ScriptedEngine>(testing::TwoColumnScene());
  OcrConfig cfg;
  Rig() { cfg.models = testing::SyntheticBindings(dir.path()); }
  OcrPipeline Pipeline() const { return OcrPipeline(cfg, testing::SessionFor(engine)); }
};

std::vector<std::string> Texts(const Page &p) {
  std::vector<std::string> out;
  for (const TextLine &l : p.text_lines) out.push_back(l.text);
  return out;
}

TEST_CASE("run_ocr: blank page, trace of the default toggles, geometry round-trip") {
  Rig rig;
  const OcrPipeline pipeline = rig.Pipeline();
  const OcrResult blank = pipeline.Run(Image(64, 32, 255));
  CHECK(blank.page.text_lines.empty());
  CHECK(blank.trace == std::vector<std::string>{kStageTextDet});

  const Image page = testing::RenderScene(testing::TwoColumnScene());
  const OcrResult r = pipeline.Run(page, 3);
  CHECK(r.page.index == 3);
  CHECK(r.trace == std::vector<std::string>{kStageTextDet, kStageTextRec});
  const std::vector<Quad> quads =
      extract_text_regions(ProbabilityMap::FromTensor(testing::SyntheticProbabilityMap(page)),
                           rig.cfg.detection);
  REQUIRE(r.page.text_lines.size() == quads.size());
  for (size_t i = 0; i < quads.size(); ++i) CHECK(r.page.text_lines[i].geometry == quads[i]);
  const auto texts = Texts(r.page);
  CHECK(std::find(texts.begin(), texts.end(), "Quarterly Field Report") != texts.end());
  CHECK(std::find(texts.begin(), texts.end(), "South & East") != texts.end());
}

TEST_CASE("run_ocr: every toggle adds its stage") {
  Rig rig;
  rig.cfg.use_doc_orientation_classify = true;
  rig.cfg.use_doc_unwarping = true;
  rig.cfg.use_textline_orientation = true;
  const OcrResult r = rig.Pipeline().Run(testing::RenderScene(testing::TwoColumnScene()));
  CHECK(r.trace == std::vector<std::string>{kStageDocOrientation, kStageUnwarp, kStageTextDet,
                                            kStageLineOrientation, kStageTextRec});
}

TEST_CASE("run_ocr: missing bindings for enabled toggles are config errors") {
  Rig rig;
  rig.cfg.use_doc_unwarping = true;
  rig.cfg.models.erase(ModelTask::kUnwarp);
  CHECK(ErrorOf([&] { rig.Pipeline(); }) == ErrorCode::kConfigError);
  rig.cfg.use_doc_unwarping = false;
  CHECK_FALSE(ErrorOf([&] { rig.Pipeline(); }).has_value());
}

TEST_CASE("run_ocr maps lines of a rotated page back to the input") {
  Rig rig;
  const Image upright = testing::RenderScene(testing::TwoColumnScene());
  const OcrResult base = rig.Pipeline().Run(upright);

  rig.cfg.use_doc_orientation_classify = true;
  rig.engine->overrides[ModelTask::kDocOrientation] = [](const TensorMap &in) {
    const Image img = ImageFromTensor(in.at("image"));
    const float s90 = img.width() > img.height() ? 0.9f : 0.0f;
    return TensorMap{{"scores", Tensor::F32({1, 4}, std::vector<float>{0.1f, s90, 0, 0})}};
  };
  const OcrResult r = rig.Pipeline().Run(Rotate(upright, Rotation::k90));
  CHECK(r.doc_rotation == Rotation::k90);
  CHECK(r.page.width == upright.height());
  REQUIRE(r.page.text_lines.size() == base.page.text_lines.size());
  for (size_t i = 0; i < base.page.text_lines.size(); ++i) {
    Quad expected = base.page.text_lines[i].geometry;
    for (Point &p : expected) p = RotatePoint(p, Rotation::k90, upright.width(), upright.height());
    expected = normalize_quad(expected);
    CHECK(r.page.text_lines[i].text == base.page.text_lines[i].text);
    for (int k = 0; k < 4; ++k) {
      CHECK(r.page.text_lines[i].geometry[k].x == doctest::Approx(expected[k].x));
      CHECK(r.page.text_lines[i].geometry[k].y == doctest::Approx(expected[k].y));
    }
  }
}

TEST_CASE("unwarp output and its sampling grid map geometry back") {
  Rig rig;
  rig.cfg.use_doc_unwarping = true;
  const Image page = testing::RenderScene(testing::TwoColumnScene());
  // The "unwarped" page is the input shifted right by 10 px; the grid says so.
  rig.engine->overrides[ModelTask::kUnwarp] = [](const TensorMap &in) {
    const Image src = ImageFromTensor(in.at("image"));
    Image out(src.width(), src.height(), 255);
    std::vector<float> grid;
    for (int y = 0; y < src.height(); ++y) {
      for (int x = 0; x < src.width(); ++x) {
        if (x >= 10) {
          for (int c = 0; c < 3; ++c) out.at(x, y, c) = src.at(x - 10, y, c);
        }
        grid.push_back(static_cast<float>(x + 0.5 - 10));
        grid.push_back(static_cast<float>(y + 0.5));
      }
    }
    return std::optional<TensorMap>(TensorMap{
        {"image", ImageToTensor(out)},
        {"grid", Tensor::F32({src.height(), src.width(), 2}, grid)}});
  };
  const OcrResult shifted = rig.Pipeline().Run(page);
  rig.cfg.use_doc_unwarping = false;
  const OcrResult plain = rig.Pipeline().Run(page);
  REQUIRE(shifted.page.text_lines.size() == plain.page.text_lines.size());
  for (size_t i = 0; i < plain.page.text_lines.size(); ++i) {
    CHECK(shifted.page.text_lines[i].text == plain.page.text_lines[i].text);
    const BBox a = bounding_box(shifted.page.text_lines[i].geometry);
    const BBox b = bounding_box(plain.page.text_lines[i].geometry);
    CHECK(a.x0 == doctest::Approx(b.x0).epsilon(0.01));
    CHECK(a.y1 == doctest::Approx(b.y1).epsilon(0.01));
  }
}

TEST_CASE("line orientation flips upside-down crops before recognition") {
  Rig rig;
  Image line(80, 20, 255);
  testing::DrawText(line, 6, 6, "abc def");
  const Image upside_down = Rotate(line, Rotation::k180);
  CHECK(rig.Pipeline().RecognizeLine(line).text == "abc def");

  rig.cfg.use_textline_orientation = true;
  rig.engine->overrides[ModelTask::kLineOrientation] = [](const TensorMap &) {
    return TensorMap{{"scores", Tensor::F32({1, 2}, std::vector<float>{0.2f, 0.8f})}};
  };
  bool ran = false;
  const RecognizedLine fixed = rig.Pipeline().RecognizeLine(upside_down, &ran);
  CHECK(ran);
  CHECK(fixed.orientation == LineOrientation::kDeg180);
  CHECK(fixed.text == "abc def");
}

TEST_CASE("charset files") {
  CHECK(Charset::FromString("a\nb\r\nc\n").graphemes() == std::vector<std::string>{"a", "b", "c"});
  CHECK(Charset::FromString("a\nb").size() == 3);
  CHECK(ErrorOf([] { Charset::FromString("a\na"); }) == ErrorCode::kConfigError);
  CHECK(ErrorOf([] { Charset::FromString("a\n\nb"); }) == ErrorCode::kConfigError);
}

}  // namespace
}  // namespace ocrkit::ocr
