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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ocrkit/document.h"
#include "ocrkit/geometry.h"

namespace ocrkit::layout {

struct RawDetection {
  BBox bbox;
  Category category = Category::kText;
  double score = 0.0;
};

struct LayoutParams {
  double score_thresh = 0.5;
  double nms_iou = 0.5;
  double containment_ratio = 0.9;
};

enum class OrderMode { kHorizontal, kVertical };

std::string_view OrderModeName(OrderMode m);
std::optional<OrderMode> ParseOrderMode(std::string_view name);

struct CutParams {
  double min_gap = 5.0;
  double shrink = 2.0;
};

void ValidateLayoutParams(const LayoutParams &p);
void ValidateCutParams(const CutParams &p);

// Score filter, class-aware NMS (score, then area, decides), then removal of
// blocks mostly contained in a larger block of the same category. Survivors
// keep their input order.
std::vector<LayoutBlock> postprocess_layout(std::span<const RawDetection> dets,
                                            const LayoutParams &p);

// Region ids follow the X-Y cut order of the region boxes. A block joins the
// region covering the largest share of its area; below half it gets a fresh
// singleton region numbered after the real ones.
std::vector<LayoutBlock> assign_regions(std::vector<LayoutBlock> blocks,
                                        std::span<const RawDetection> regions,
                                        OrderMode mode = OrderMode::kHorizontal,
                                        const CutParams &cut = {});

inline constexpr double kRegionMinCoverage = 0.5;

// Recursive X-Y cut over boxes. At every step the widest whitespace gap
// (at least min_gap wide, measured on boxes shrunk by `shrink`) on either
// axis splits the set in two; equal widths prefer a horizontal cut line in
// Horizontal mode and a vertical one in Vertical mode, then the smaller
// coordinate. Columns run left-to-right (Horizontal) or right-to-left
// (Vertical). Sets without a gap sort by (y0, x0) or (-x1, y0).
std::vector<size_t> xy_cut_order(std::span<const BBox> boxes, OrderMode mode,
                                 const CutParams &p);

// Region-first reading order: regions (union of their blocks) are ordered
// by X-Y cut, then blocks within each region; Header blocks come first and
// Footer blocks last. Returns a permutation of the input indices.
std::vector<size_t> recover_reading_order(std::span<const LayoutBlock> blocks, OrderMode mode,
                                          const CutParams &p);

// Majority vote over line aspect ratios (taller than 1.5x wide = vertical).
OrderMode DetectOrderMode(std::span<const TextLine> lines);

}  // namespace ocrkit::layout
