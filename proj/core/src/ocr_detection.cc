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
#include <limits>
#include <map>

#include "ocrkit/error.h"
#include "ocrkit/ocr.h"

namespace ocrkit::ocr {
namespace {

double Cross(const Point &o, const Point &a, const Point &b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double MinSide(const Quad &q) {
  double m = std::hypot(q[1].x - q[0].x, q[1].y - q[0].y);
  for (size_t i = 1; i < 4; ++i) {
    const Point &a = q[i];
    const Point &b = q[(i + 1) % 4];
    m = std::min(m, std::hypot(b.x - a.x, b.y - a.y));
  }
  return m;
}

struct Component {
  size_t pixels = 0;
  double sum = 0.0;
  // Per covered row: leftmost and rightmost pixel column.
  std::vector<std::array<int, 3>> rows;  // {y, min_x, max_x}
};

}  // namespace

ProbabilityMap::ProbabilityMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 0 || height < 0 ||
      values_.size() != static_cast<size_t>(width) * static_cast<size_t>(height)) {
    Fail(ErrorCode::kShapeMismatch, "probability map size does not match its dimensions");
  }
  for (float v : values_) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      Fail(ErrorCode::kShapeMismatch, "probability map values must lie in [0, 1]");
    }
  }
}

ProbabilityMap ProbabilityMap::FromTensor(const Tensor &t) {
  if (t.rank() < 2) Fail(ErrorCode::kShapeMismatch, "probability map needs rank >= 2");
  const auto &s = t.shape();
  const int64_t h = s[s.size() - 2];
  const int64_t w = s[s.size() - 1];
  if (static_cast<size_t>(h * w) != t.element_count()) {
    Fail(ErrorCode::kShapeMismatch, "probability map must hold a single channel");
  }
  return ProbabilityMap(static_cast<int>(w), static_cast<int>(h), t.ToFloat());
}

void ValidateDetectionParams(const DetectionParams &p) {
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(p.bin_thresh) || !unit(p.box_score_thresh)) {
    Fail(ErrorCode::kConfigError, "detection thresholds must lie in [0, 1]");
  }
  if (p.unclip_ratio < 0.0 || p.min_box_side < 0.0 || p.max_candidates < 0) {
    Fail(ErrorCode::kConfigError, "detection sizes must be non-negative");
  }
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point &a, const Point &b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  size_t k = 0;
  for (const Point &p : pts) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Quad min_area_rect(std::span<const Point> points) {
  const std::vector<Point> hull = convex_hull({points.begin(), points.end()});
  if (hull.size() < 3) return quad_from_box(bounding_box(points));

  double best_area = std::numeric_limits<double>::infinity();
  Quad best{};
  for (size_t i = 0; i < hull.size(); ++i) {
    const Point &a = hull[i];
    const Point &b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue;
    const Point u{(b.x - a.x) / len, (b.y - a.y) / len};
    const Point v{-u.y, u.x};
    double min_u = std::numeric_limits<double>::infinity();
    double max_u = -min_u;
    double min_v = min_u;
    double max_v = -min_u;
    for (const Point &p : hull) {
      const double pu = p.x * u.x + p.y * u.y;
      const double pv = p.x * v.x + p.y * v.y;
      min_u = std::min(min_u, pu);
      max_u = std::max(max_u, pu);
      min_v = std::min(min_v, pv);
      max_v = std::max(max_v, pv);
    }
    const double area = (max_u - min_u) * (max_v - min_v);
    if (area < best_area - 1e-9) {
      best_area = area;
      const auto corner = [&](double cu, double cv) {
        return Point{u.x * cu + v.x * cv, u.y * cu + v.y * cv};
      };
      best = {corner(min_u, min_v), corner(max_u, min_v), corner(max_u, max_v),
              corner(min_u, max_v)};
    }
  }
  return normalize_quad(best);
}

std::vector<TextRegion> find_text_regions(const ProbabilityMap &map, const DetectionParams &p) {
  ValidateDetectionParams(p);
  const int w = map.width();
  const int h = map.height();
  std::vector<int> label(static_cast<size_t>(w) * h, -1);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;

  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const size_t idx0 = static_cast<size_t>(y0) * w + x0;
      if (label[idx0] >= 0 || !(map.at(x0, y0) > p.bin_thresh)) continue;
      const int id = static_cast<int>(comps.size());
      Component comp;
      std::map<int, std::pair<int, int>> rows;
      label[idx0] = id;
      stack.assign(1, {x0, y0});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        comp.pixels += 1;
        comp.sum += map.at(x, y);
        auto [it, inserted] = rows.try_emplace(y, x, x);
        if (!inserted) {
          it->second.first = std::min(it->second.first, x);
          it->second.second = std::max(it->second.second, x);
        }
        constexpr int kDx[4] = {1, -1, 0, 0};
        constexpr int kDy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = x + kDx[k];
          const int ny = y + kDy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const size_t nidx = static_cast<size_t>(ny) * w + nx;
          if (label[nidx] >= 0 || !(map.at(nx, ny) > p.bin_thresh)) continue;
          label[nidx] = id;
          stack.push_back({nx, ny});
        }
      }
      for (const auto &[y, span] : rows) comp.rows.push_back({y, span.first, span.second});
      comps.push_back(std::move(comp));
    }
  }

  std::vector<TextRegion> out;
  for (const Component &c : comps) {
    const double score = c.sum / static_cast<double>(c.pixels);
    if (score < p.box_score_thresh) continue;
    // Pixel (x, y) covers [x, x+1] x [y, y+1]; the extreme corners of each
    // row are enough for the hull.
    std::vector<Point> corners;
    corners.reserve(c.rows.size() * 4);
    for (const auto &[y, x_min, x_max] : c.rows) {
      corners.push_back({static_cast<double>(x_min), static_cast<double>(y)});
      corners.push_back({static_cast<double>(x_min), static_cast<double>(y + 1)});
      corners.push_back({static_cast<double>(x_max + 1), static_cast<double>(y)});
      corners.push_back({static_cast<double>(x_max + 1), static_cast<double>(y + 1)});
    }
    const Quad raw = min_area_rect(corners);
    Quad box = normalize_quad(expand_quad(raw, p.unclip_ratio));
    for (Point &pt : box) {
      pt.x = std::clamp(pt.x, 0.0, static_cast<double>(w));
      pt.y = std::clamp(pt.y, 0.0, static_cast<double>(h));
    }
    if (MinSide(box) < p.min_box_side) continue;
    out.push_back({box, raw, score});
  }

  std::stable_sort(out.begin(), out.end(), [](const TextRegion &a, const TextRegion &b) {
    if (a.box[0].y != b.box[0].y) return a.box[0].y < b.box[0].y;
    return a.box[0].x < b.box[0].x;
  });
  if (out.size() > static_cast<size_t>(p.max_candidates)) out.resize(p.max_candidates);
  return out;
}

std::vector<Quad> extract_text_regions(const ProbabilityMap &map, const DetectionParams &p) {
  std::vector<Quad> out;
  for (const TextRegion &r : find_text_regions(map, p)) out.push_back(r.box);
  return out;
}

Image crop_line(const Image &page, const Quad &q) {
  if (quad_is_degenerate(q) || polygon_area(q) < 1e-9) {
    Fail(ErrorCode::kDegenerateGeometry, "cannot crop a degenerate quad");
  }
  const auto dist = [](const Point &a, const Point &b) {
    return std::hypot(a.x - b.x, a.y - b.y);
  };
  const int w = static_cast<int>(std::lround(std::max(dist(q[0], q[1]), dist(q[3], q[2]))));
  const int h = static_cast<int>(std::lround(std::max(dist(q[0], q[3]), dist(q[1], q[2]))));
  if (w < 1 || h < 1) Fail(ErrorCode::kDegenerateGeometry, "quad is smaller than a pixel");
  const Homography to_src = perspective_homography(q, w, h).Inverse();
  Image crop = Warp(page, to_src, w, h);
  if (static_cast<double>(h) / w > kVerticalAspect) crop = Rotate(crop, Rotation::k90);
  return crop;
}

}  // namespace ocrkit::ocr
