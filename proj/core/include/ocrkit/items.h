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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrkit/backend.h"
#include "ocrkit/diagnostics.h"
#include "ocrkit/document.h"
#include "ocrkit/image.h"

namespace ocrkit::items {

enum class TableFrame { kWired, kWireless };

std::string_view TableFrameName(TableFrame f);

struct TableRoute {
  Rotation orientation = Rotation::k0;
  TableFrame frame = TableFrame::kWired;
};

// Argmax of a 4-way orientation and a 2-way frame score vector; ties resolve
// to 0 degrees and Wired.
TableRoute route_table(std::span<const float> orientation_scores,
                       std::span<const float> frame_scores);

// Turns a crop classified as rotated by `route.orientation` upright.
Image UprightTable(const Image &crop, const TableRoute &route);

struct TableCell {
  BBox bbox;
  std::string text;
};

// One HTML tag per element, e.g. "<tr>" or "<td colspan=2>".
using StructureTokens = std::vector<std::string>;

// Integer vocabulary used by table-structure models.
inline constexpr int64_t kTokTableOpen = 0;
inline constexpr int64_t kTokTableClose = 1;
inline constexpr int64_t kTokRowOpen = 2;
inline constexpr int64_t kTokRowClose = 3;
inline constexpr int64_t kTokCellOpen = 4;
inline constexpr int64_t kTokCellClose = 5;
inline constexpr int64_t kTokColspanBase = 100;
inline constexpr int64_t kTokRowspanBase = 200;

StructureTokens TokensFromIds(std::span<const int64_t> ids);
// Splits concatenated tags ("<table><tr>...") into tokens.
StructureTokens TokenizeStructure(std::string_view html);

bool IsCellOpen(std::string_view token);
// Checks the tag alphabet and table/tr/td nesting; returns the td count.
size_t ValidateStructure(const StructureTokens &tokens);

inline constexpr double kCellMinOverlap = 0.5;

// Index of the cell each line belongs to, or -1. Overlap is measured as a
// share of the line's bounding box.
std::vector<int> match_lines_to_cells(std::span<const BBox> cells,
                                      std::span<const TextLine> lines);

std::string assemble_table_html(const StructureTokens &tokens, std::span<const BBox> cells,
                                std::span<const TextLine> lines, Diagnostics *diag = nullptr);

inline constexpr size_t kFormulaMaxTokens = 2560;

// Returns `raw` when it is acceptable LaTeX output, else throws ContentError.
std::string ValidateFormula(std::string raw);
// Returns `raw` when it is a well-formed pipe table, else throws ContentError.
std::string ValidateChartTable(std::string raw);

std::string recognize_formula(backends::InferenceSession &session,
                              const backends::ModelDescriptor &model, const Image &crop);
std::string chart_to_table(backends::InferenceSession &session,
                           const backends::ModelDescriptor &model, const Image &crop);

inline constexpr int kSealResamplePoints = 32;

// Resamples an open polyline to `n` points evenly spaced by arc length.
std::vector<Point> ResamplePolyline(std::span<const Point> line, int n);
double PolylineLength(std::span<const Point> line);

// Straightens a curved text band. The first half of the polygon is the top
// edge (left to right), the second half the bottom edge (right to left).
// Four-point polygons fall back to a perspective crop.
Image rectify_seal_text(const Polygon &poly, const Image &image);

}  // namespace ocrkit::items
