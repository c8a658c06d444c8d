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

#include <array>
#include <span>
#include <vector>

// Geometric primitives shared by every pipeline stage.
// Coordinates are pixels, origin top-left, y pointing down.

namespace ocrkit {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point &, const Point &) = default;
};

struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool valid() const { return x0 <= x1 && y0 <= y1; }

  friend bool operator==(const BBox &, const BBox &) = default;
};

// Four corners, clockwise (as seen on screen) starting top-left.
using Quad = std::array<Point, 4>;

// Closed implicitly: the last point connects back to the first.
using Polygon = std::vector<Point>;

// Row-major 3x3 projective transform.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  Point Apply(Point p) const;
  Homography Inverse() const;
};

double polygon_area(std::span<const Point> points);
double polygon_perimeter(std::span<const Point> points);

double intersection_area(const BBox &a, const BBox &b);
double iou(const BBox &a, const BBox &b);
// Share of `inner`'s area covered by `outer`; 0 for empty `inner`.
double coverage(const BBox &inner, const BBox &outer);

BBox bounding_box(std::span<const Point> points);
BBox union_box(const BBox &a, const BBox &b);
// Shrinks each side by `amount`; a side pair that would cross collapses to
// its midpoint.
BBox shrink_box(const BBox &b, double amount);

Quad quad_from_box(const BBox &b);
// Reorders four corners into the canonical clockwise-from-top-left order.
Quad normalize_quad(const Quad &q);
bool quad_is_degenerate(const Quad &q, double eps = 1e-9);

// Pushes every edge outward by area * unclip_ratio / perimeter.
Quad expand_quad(const Quad &q, double unclip_ratio);

// Maps src corners onto (0,0), (w,0), (w,h), (0,h).
Homography perspective_homography(const Quad &src, double dst_w, double dst_h);
Homography homography_between(const Quad &src, const Quad &dst);

}  // namespace ocrkit
