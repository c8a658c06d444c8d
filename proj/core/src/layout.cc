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

#include "ocrkit/layout.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "ocrkit/error.h"

namespace ocrkit::layout {
namespace {

struct Gap {
  bool vertical_line = false;  // true: splits left/right (x-projection)
  double start = 0.0;
  double end = 0.0;
  double width() const { return end - start; }
};

// Whitespace gaps of the projection of [lo, hi] intervals, in ascending order.
std::vector<Gap> ProjectionGaps(std::vector<std::pair<double, double>> spans, bool vertical_line,
                                double min_gap) {
  std::sort(spans.begin(), spans.end());
  std::vector<Gap> gaps;
  double reach = spans.front().second;
  for (size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first > reach && spans[i].first - reach >= min_gap) {
      gaps.push_back({vertical_line, reach, spans[i].first});
    }
    reach = std::max(reach, spans[i].second);
  }
  return gaps;
}

bool BaseLess(const BBox &a, const BBox &b, OrderMode mode) {
  if (mode == OrderMode::kHorizontal) {
    if (a.y0 != b.y0) return a.y0 < b.y0;
    return a.x0 < b.x0;
  }
  if (a.x1 != b.x1) return a.x1 > b.x1;
  return a.y0 < b.y0;
}

void CutRecursive(std::span<const BBox> boxes, std::span<const BBox> shrunk,
                  std::vector<size_t> idx, OrderMode mode, const CutParams &p,
                  std::vector<size_t> &out) {
  if (idx.size() <= 1) {
    out.insert(out.end(), idx.begin(), idx.end());
    return;
  }
  std::vector<std::pair<double, double>> ys;
  std::vector<std::pair<double, double>> xs;
  for (size_t i : idx) {
    ys.emplace_back(shrunk[i].y0, shrunk[i].y1);
    xs.emplace_back(shrunk[i].x0, shrunk[i].x1);
  }
  std::vector<Gap> gaps = ProjectionGaps(ys, false, p.min_gap);
  const std::vector<Gap> xgaps = ProjectionGaps(xs, true, p.min_gap);
  gaps.insert(gaps.end(), xgaps.begin(), xgaps.end());

  if (gaps.empty()) {
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      if (BaseLess(boxes[a], boxes[b], mode)) return true;
      if (BaseLess(boxes[b], boxes[a], mode)) return false;
      return a < b;
    });
    out.insert(out.end(), idx.begin(), idx.end());
    return;
  }

  const bool prefer_vertical_line = mode == OrderMode::kVertical;
  const auto better = [&](const Gap &a, const Gap &b) {
    if (a.width() != b.width()) return a.width() > b.width();
    if (a.vertical_line != b.vertical_line) return a.vertical_line == prefer_vertical_line;
    return a.start < b.start;
  };
  const Gap best = *std::min_element(gaps.begin(), gaps.end(), better);

  std::vector<size_t> first;
  std::vector<size_t> second;
  for (size_t i : idx) {
    const double hi = best.vertical_line ? shrunk[i].x1 : shrunk[i].y1;
    (hi <= best.start ? first : second).push_back(i);
  }
  if (best.vertical_line && mode == OrderMode::kVertical) std::swap(first, second);
  CutRecursive(boxes, shrunk, std::move(first), mode, p, out);
  CutRecursive(boxes, shrunk, std::move(second), mode, p, out);
}

}  // namespace

std::string_view OrderModeName(OrderMode m) {
  return m == OrderMode::kHorizontal ? "horizontal" : "vertical";
}

std::optional<OrderMode> ParseOrderMode(std::string_view name) {
  if (name == "horizontal") return OrderMode::kHorizontal;
  if (name == "vertical") return OrderMode::kVertical;
  return std::nullopt;
}

void ValidateLayoutParams(const LayoutParams &p) {
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(p.score_thresh) || !unit(p.nms_iou) || !unit(p.containment_ratio)) {
    Fail(ErrorCode::kConfigError, "layout thresholds must lie in [0, 1]");
  }
}

void ValidateCutParams(const CutParams &p) {
  if (p.min_gap < 0.0 || p.shrink < 0.0) {
    Fail(ErrorCode::kConfigError, "cut parameters must be non-negative");
  }
}

std::vector<LayoutBlock> postprocess_layout(std::span<const RawDetection> dets,
                                            const LayoutParams &p) {
  ValidateLayoutParams(p);
  std::vector<size_t> order;
  for (size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score >= p.score_thresh) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    return dets[a].bbox.area() > dets[b].bbox.area();
  });

  std::vector<size_t> kept;
  for (size_t i : order) {
    bool suppressed = false;
    for (size_t k : kept) {
      if (dets[k].category == dets[i].category && iou(dets[k].bbox, dets[i].bbox) >= p.nms_iou) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(i);
  }

  std::vector<bool> drop(dets.size(), false);
  for (size_t a : kept) {
    for (size_t b : kept) {
      if (a == b || dets[a].category != dets[b].category) continue;
      const double area_a = dets[a].bbox.area();
      const double area_b = dets[b].bbox.area();
      const bool b_larger = area_b > area_a || (area_b == area_a && b < a);
      if (b_larger && coverage(dets[a].bbox, dets[b].bbox) >= p.containment_ratio) {
        drop[a] = true;
        break;
      }
    }
  }

  std::sort(kept.begin(), kept.end());
  std::vector<LayoutBlock> out;
  for (size_t i : kept) {
    if (drop[i]) continue;
    out.push_back({dets[i].bbox, dets[i].category, dets[i].score, std::nullopt, std::nullopt});
  }
  return out;
}

std::vector<LayoutBlock> assign_regions(std::vector<LayoutBlock> blocks,
                                        std::span<const RawDetection> regions, OrderMode mode,
                                        const CutParams &cut) {
  std::vector<BBox> region_boxes;
  for (const RawDetection &r : regions) region_boxes.push_back(r.bbox);
  const std::vector<size_t> region_order = xy_cut_order(region_boxes, mode, cut);

  int next_singleton = static_cast<int>(regions.size());
  for (LayoutBlock &b : blocks) {
    double best = 0.0;
    int best_id = -1;
    for (size_t rank = 0; rank < region_order.size(); ++rank) {
      const double c = coverage(b.bbox, region_boxes[region_order[rank]]);
      if (c > best) {
        best = c;
        best_id = static_cast<int>(rank);
      }
    }
    b.region_id = best >= kRegionMinCoverage ? best_id : next_singleton++;
  }
  return blocks;
}

std::vector<size_t> xy_cut_order(std::span<const BBox> boxes, OrderMode mode,
                                 const CutParams &p) {
  ValidateCutParams(p);
  std::vector<BBox> shrunk;
  shrunk.reserve(boxes.size());
  for (const BBox &b : boxes) shrunk.push_back(shrink_box(b, p.shrink));
  std::vector<size_t> idx(boxes.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<size_t> out;
  out.reserve(boxes.size());
  CutRecursive(boxes, shrunk, std::move(idx), mode, p, out);
  return out;
}

std::vector<size_t> recover_reading_order(std::span<const LayoutBlock> blocks, OrderMode mode,
                                          const CutParams &p) {
  std::vector<size_t> headers;
  std::vector<size_t> footers;
  // Region key -> member block indices; unassigned blocks become singletons.
  std::map<std::pair<int, size_t>, std::vector<size_t>> regions;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].category == Category::kHeader) {
      headers.push_back(i);
    } else if (blocks[i].category == Category::kFooter) {
      footers.push_back(i);
    } else if (blocks[i].region_id) {
      regions[{0, static_cast<size_t>(*blocks[i].region_id)}].push_back(i);
    } else {
      regions[{1, i}].push_back(i);
    }
  }

  const auto base_sorted = [&](std::vector<size_t> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return BaseLess(blocks[a].bbox, blocks[b].bbox, mode);
    });
    return idx;
  };

  std::vector<std::vector<size_t>> members;
  std::vector<BBox> region_boxes;
  for (auto &[key, idx] : regions) {
    BBox box = blocks[idx.front()].bbox;
    for (size_t i : idx) box = union_box(box, blocks[i].bbox);
    region_boxes.push_back(box);
    members.push_back(idx);
  }

  std::vector<size_t> out = base_sorted(headers);
  for (size_t r : xy_cut_order(region_boxes, mode, p)) {
    std::vector<BBox> boxes;
    for (size_t i : members[r]) boxes.push_back(blocks[i].bbox);
    for (size_t local : xy_cut_order(boxes, mode, p)) out.push_back(members[r][local]);
  }
  for (size_t i : base_sorted(footers)) out.push_back(i);
  return out;
}

OrderMode DetectOrderMode(std::span<const TextLine> lines) {
  size_t vertical = 0;
  for (const TextLine &l : lines) {
    const BBox b = bounding_box(l.geometry);
    if (b.height() > 1.5 * b.width()) ++vertical;
  }
  return 2 * vertical > lines.size() ? OrderMode::kVertical : OrderMode::kHorizontal;
}

}  // namespace ocrkit::layout
