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


// Independent reference implementations used to check the library. They
// favour obviousness over speed.

#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrkit/backend.h"
#include "ocrkit/document.h"
#include "ocrkit/geometry.h"
#include "ocrkit/layout.h"
#include "ocrkit/ocr.h"

namespace ocrkit::testing {

// Collapses repeats, then drops blanks (class 0), then maps to graphemes.
std::string CtcCollapseOracle(const std::vector<int> &argmax, const ocr::Charset &cs);

// Textbook recursive edit distance over code points, memoized so that
// strings of a dozen characters stay cheap.
size_t LevenshteinOracle(std::u32string_view a, std::u32string_view b);

// X-Y cut that finds cuts by trying every bipartition of the block set
// instead of sweeping projections. Same preference rules as the library:
// widest gap, then the axis preferred by the mode, then the smaller start.
std::vector<size_t> XyCutOracle(std::span<const BBox> boxes, layout::OrderMode mode,
                                const layout::CutParams &p);

// Headers, then regions in cut order with members in cut order, then footers.
std::vector<size_t> ReadingOrderOracle(std::span<const LayoutBlock> blocks,
                                       layout::OrderMode mode, const layout::CutParams &p);

// The backend decision table written out as explicit per-device rankings.
struct ExpectedBackend {
  backends::EngineKind kind;
  bool warns;
};
std::optional<ExpectedBackend> BackendTableOracle(const backends::Device &device,
                                                  const std::set<backends::EngineKind> &hints,
                                                  const std::set<backends::EngineKind> &available);

// True when every tag is closed in order and nothing is left open.
bool IsBalancedHtml(std::string_view html);

// Number of <td ...> opening tags.
size_t CountCells(std::string_view html);

}  // namespace ocrkit::testing
