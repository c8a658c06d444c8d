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
#include <cmath>

#include "doctest.h"
#include "ocrkit/base64.h"
#include "ocrkit/document.h"
#include "ocrkit/geometry.h"
#include "ocrkit/image.h"
#include "ocrkit/tensor.h"
#include "ocrkit/text.h"
#include "test_util.h"

namespace ocrkit {
namespace {

using testing::ErrorOf;
using testing::Rng;
using testing::Uniform;

BBox RandomBox(Rng &rng) {
  const double x = Uniform(rng, -50, 50);
  const double y = Uniform(rng, -50, 50);
  return {x, y, x + Uniform(rng, 0.1, 40), y + Uniform(rng, 0.1, 40)};
}

Quad Square(double side) { return quad_from_box({0, 0, side, side}); }

TEST_CASE("polygon_area examples") {
  const Polygon unit = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_area(unit) == doctest::Approx(1.0));
  const Polygon tri = {{0, 0}, {2, 0}, {0, 2}};
  CHECK(polygon_area(tri) == doctest::Approx(2.0));
  const Polygon line = {{0, 0}, {1, 1}, {2, 2}};
  CHECK(polygon_area(line) == 0.0);
}

TEST_CASE("polygon_area is invariant under cyclic rotation and translation") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    Polygon p;
    const int n = testing::UniformInt(rng, 3, 9);
    for (int i = 0; i < n; ++i) p.push_back({Uniform(rng, -10, 10), Uniform(rng, -10, 10)});
    const double area = polygon_area(p);
    Polygon rotated = p;
    std::rotate(rotated.begin(), rotated.begin() + trial % n, rotated.end());
    CHECK(polygon_area(rotated) == doctest::Approx(area));
    const double dx = Uniform(rng, -100, 100);
    const double dy = Uniform(rng, -100, 100);
    for (Point &q : rotated) q = {q.x + dx, q.y + dy};
    CHECK(polygon_area(rotated) == doctest::Approx(area).epsilon(1e-9));
  }
}

TEST_CASE("iou examples") {
  const BBox a{0, 0, 2, 2};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, {5, 5, 6, 6}) == 0.0);
  CHECK(iou(a, {1, 0, 3, 2}) == doctest::Approx(1.0 / 3.0));
  CHECK(iou({1, 1, 1, 1}, {1, 1, 1, 1}) == 0.0);
}

TEST_CASE("iou is symmetric and bounded") {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const BBox a = RandomBox(rng);
    const BBox b = RandomBox(rng);
    const double v = iou(a, b);
    CHECK(v == iou(b, a));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(iou(a, a) == doctest::Approx(1.0));
  }
}

TEST_CASE("expand_quad offsets every edge by area * ratio / perimeter") {
  CHECK(expand_quad(Square(2), 0.0) == Square(2));
  const Quad q = expand_quad(Square(2), 1.5);
  const BBox b = bounding_box(q);
  CHECK(b.width() == doctest::Approx(3.5));
  CHECK(b.height() == doctest::Approx(3.5));
  CHECK(b.x0 == doctest::Approx(-0.75));
  const BBox b8 = bounding_box(expand_quad(Square(4), 2.0));
  CHECK(b8.width() == doctest::Approx(8.0));
  CHECK(ErrorOf([] { expand_quad(quad_from_box({1, 1, 1, 5}), 1.5); }) ==
        ErrorCode::kDegenerateGeometry);
}

TEST_CASE("expand_quad area grows monotonically with the ratio") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Quad q = quad_from_box(RandomBox(rng));
    double prev = polygon_area(q);
    for (double r = 0.25; r <= 3.0; r += 0.25) {
      const double a = polygon_area(expand_quad(q, r));
      CHECK(a >= prev - 1e-9);
      prev = a;
    }
  }
}

TEST_CASE("perspective_homography maps corners onto the target rectangle") {
  const Quad axis = quad_from_box({10, 20, 110, 70});
  const Homography h = perspective_homography(axis, 100, 50);
  CHECK(h.Apply({10, 20}).x == doctest::Approx(0.0));
  CHECK(h.Apply({110, 70}).x == doctest::Approx(100.0));
  CHECK(h.Apply({60, 45}).y == doctest::Approx(25.0));

  // A rectangle rotated by 90 degrees: corners listed from the new top-left.
  const Quad rotated = {Point{50, 0}, Point{50, 30}, Point{0, 30}, Point{0, 0}};
  const Homography r = perspective_homography(rotated, 30, 50);
  const Point dst[4] = {{0, 0}, {30, 0}, {30, 50}, {0, 50}};
  for (int i = 0; i < 4; ++i) {
    const Point p = r.Apply(rotated[i]);
    CHECK(std::hypot(p.x - dst[i].x, p.y - dst[i].y) < 1e-6);
  }
  const Quad collinear = {Point{0, 0}, Point{1, 1}, Point{2, 2}, Point{0, 5}};
  CHECK(ErrorOf([&] { perspective_homography(collinear, 10, 10); }) ==
        ErrorCode::kDegenerateGeometry);
  CHECK(ErrorOf([&] { perspective_homography(axis, 0, 10); }) == ErrorCode::kDegenerateGeometry);
}

TEST_CASE("normalize_quad orders corners clockwise from the top-left") {
  const Quad scrambled = {Point{10, 10}, Point{0, 0}, Point{0, 10}, Point{10, 0}};
  const Quad q = normalize_quad(scrambled);
  CHECK(q[0] == Point{0, 0});
  CHECK(q[1] == Point{10, 0});
  CHECK(q[2] == Point{10, 10});
  CHECK(q[3] == Point{0, 10});
}

TEST_CASE("coverage, union and shrink") {
  CHECK(coverage({0, 0, 2, 2}, {1, 0, 5, 5}) == doctest::Approx(0.5));
  CHECK(union_box({0, 0, 1, 1}, {2, 3, 4, 5}) == BBox{0, 0, 4, 5});
  const BBox s = shrink_box({0, 0, 10, 2}, 2.0);
  CHECK(s.valid());
  CHECK(s.x0 == 2.0);
}

TEST_CASE("tensor serialization round-trips") {
  const std::vector<float> v = {1.5f, -2.0f, 0.25f, 8.0f, 0.0f, 3.0f};
  const Tensor t = Tensor::F32({2, 3}, v);
  CHECK(DeserializeTensor(SerializeTensor(t)) == t);
  const Tensor text = Tensor::Text("E = m c^{2}");
  CHECK(DeserializeTensor(SerializeTensor(text)).AsText() == "E = m c^{2}");
  CHECK(ErrorOf([] { Tensor(DType::kF32, {2, 2}, std::vector<std::byte>(3)); }) ==
        ErrorCode::kShapeMismatch);
  CHECK(ErrorOf([&] { t.i64(); }) == ErrorCode::kShapeMismatch);
  CHECK(HalfToFloat(FloatToHalf(0.5f)) == 0.5f);
  CHECK(HalfToFloat(FloatToHalf(-3.0f)) == -3.0f);
}

TEST_CASE("text helpers") {
  const std::string s = "na\xc3\xafve \xe6\x96\x87";
  CHECK(text::EncodeUtf8(text::DecodeUtf8(s)) == s);
  CHECK(text::CodePointCount(s) == 7);
  CHECK(text::EscapeHtml("a<b & c>") == "a&lt;b &amp; c&gt;");
  CHECK(text::UnescapeHtml("a&lt;b &amp; c&gt;") == "a<b & c>");
  CHECK(text::CollapseWhitespace("  a \t b\n") == "a b");
}

TEST_CASE("image rotation, crop and PNG round-trip") {
  Image img(5, 3, 255);
  img.Fill({1, 0, 2, 1}, 10, 20, 30);
  Image r = img;
  for (int i = 0; i < 4; ++i) r = Rotate(r, Rotation::k90);
  CHECK(r == img);
  CHECK(Rotate(img, Rotation::k90).width() == 3);
  CHECK(DecodeImage(EncodePng(img)) == img);
  const Image c = CropBox(img, 1, 0, 3, 2);
  CHECK(c.width() == 2);
  CHECK(c.at(0, 0, 2) == 30);
  CHECK(ErrorOf([&] { DecodeImage(std::vector<uint8_t>{1, 2, 3}); }) == ErrorCode::kDecodeError);
  CHECK(Inverse(Rotation::k90) == Rotation::k270);
}

TEST_CASE("base64 round-trips and rejects malformed text") {
  const std::vector<uint8_t> data = {0, 1, 2, 250, 251, 252, 253};
  const std::string enc = Base64Encode(data);
  CHECK(Base64Decode(enc) == data);
  CHECK(Base64Decode("AAEC\n+vv8/Q==") == data);
  CHECK_FALSE(Base64Decode("AAE").has_value());
  CHECK_FALSE(Base64Decode("A*==").has_value());
}

TEST_CASE("content strings per item kind") {
  DocumentItem it;
  it.content = TableContent{"<table></table>"};
  CHECK(ContentString(it) == "<table></table>");
  it.content = FormulaContent{"x^2"};
  CHECK(ContentString(it) == "x^2");
  CHECK(ParseCategory(CategoryName(Category::kSealText)) == Category::kSealText);
}

}  // namespace
}  // namespace ocrkit
