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
#include <span>
#include <string>
#include <vector>

#include "ocrkit/document.h"
#include "ocrkit/geometry.h"
#include "ocrkit/image.h"
#include "ocrkit/tensor.h"

// Deterministic stages of the text pipeline: detection-map postprocessing,
// line cropping and CTC decoding.

namespace ocrkit::ocr {

class ProbabilityMap {
 public:
  ProbabilityMap() = default;
  ProbabilityMap(int width, int height, std::vector<float> values);
  // Accepts any tensor whose trailing two dims are (height, width).
  static ProbabilityMap FromTensor(const Tensor &t);

  int width() const { return width_; }
  int height() const { return height_; }
  float at(int x, int y) const { return values_[static_cast<size_t>(y) * width_ + x]; }
  std::span<const float> values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

struct DetectionParams {
  double bin_thresh = 0.3;
  double box_score_thresh = 0.6;
  double unclip_ratio = 1.5;
  double min_box_side = 3.0;
  int max_candidates = 1000;
};

void ValidateDetectionParams(const DetectionParams &p);

struct TextRegion {
  Quad box;        // after unclip, clipped to the map
  Quad raw;        // minimum-area rectangle of the component
  double score = 0.0;  // mean map value over the component
};

// Binarize, label 4-connected components, fit minimum-area rectangles, filter
// by score, unclip, filter by size, sort by top-left corner (y, then x).
std::vector<TextRegion> find_text_regions(const ProbabilityMap &map, const DetectionParams &p);
std::vector<Quad> extract_text_regions(const ProbabilityMap &map, const DetectionParams &p);

// Minimum-area enclosing rectangle of a point set (rotating calipers over
// the convex hull), corners in canonical order.
Quad min_area_rect(std::span<const Point> points);
std::vector<Point> convex_hull(std::vector<Point> points);

// Rectified crop of the quad; width along the top edge, height along the
// left edge. Crops taller than 1.5x their width are turned 90 degrees
// clockwise.
Image crop_line(const Image &page, const Quad &q);

inline constexpr double kVerticalAspect = 1.5;

// Class 0 is the CTC blank; graphemes are classes 1..N.
class Charset {
 public:
  Charset() = default;
  explicit Charset(std::vector<std::string> graphemes);
  // UTF-8, one grapheme per line; line n is class n.
  static Charset FromFile(const std::filesystem::path &path);
  static Charset FromString(std::string_view content);

  // Including the blank.
  size_t size() const { return graphemes_.size() + 1; }
  const std::string &grapheme(size_t class_index) const;
  const std::vector<std::string> &graphemes() const { return graphemes_; }

 private:
  std::vector<std::string> graphemes_;
};

struct LogitsSequence {
  int steps = 0;
  int classes = 0;
  std::vector<float> values;  // steps x classes, row-major

  // Accepts [T, C] or [1, T, C].
  static LogitsSequence FromTensor(const Tensor &t);
  std::span<const float> row(int t) const {
    return std::span(values).subspan(static_cast<size_t>(t) * classes, classes);
  }
};

struct DecodedText {
  std::string text;
  double score = 1.0;
  std::vector<int> class_ids;
};

// Per-step argmax (ties to the lower class), merge repeats, drop blanks.
// Score is the mean probability of the emitting steps, 1.0 when none emit.
// Rows outside [0,1] are treated as raw logits and softmax-normalized for
// scoring only.
DecodedText ctc_greedy_decode(const LogitsSequence &logits, const Charset &cs);

// Index of the largest value; ties resolve to the lowest index.
size_t ArgMax(std::span<const float> scores);

Rotation DocRotationFromScores(std::span<const float> scores);
LineOrientation LineOrientationFromScores(std::span<const float> scores);

}  // namespace ocrkit::ocr
