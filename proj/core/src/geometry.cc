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

#include "ocrkit/geometry.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocrkit/error.h"

namespace ocrkit {
namespace {

double SignedArea(std::span<const Point> pts) {
  double sum = 0.0;
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    const Point &a = pts[i];
    const Point &b = pts[(i + 1) % n];
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * sum;
}

double Cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double Dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

Point Homography::Apply(Point p) const {
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w,
          (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

Homography Homography::Inverse() const {
  Eigen::Matrix3d a;
  a << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible()) {
    Fail(ErrorCode::kDegenerateGeometry, "homography is singular");
  }
  Eigen::Matrix3d inv = lu.inverse();
  Homography out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.m[r * 3 + c] = inv(r, c);
  }
  return out;
}

double polygon_area(std::span<const Point> points) {
  if (points.size() < 3) return 0.0;
  return std::abs(SignedArea(points));
}

double polygon_perimeter(std::span<const Point> points) {
  double sum = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    sum += Dist(points[i], points[(i + 1) % points.size()]);
  }
  return sum;
}

double intersection_area(const BBox &a, const BBox &b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BBox &a, const BBox &b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double coverage(const BBox &inner, const BBox &outer) {
  const double area = inner.area();
  if (area <= 0.0) return 0.0;
  return intersection_area(inner, outer) / area;
}

BBox bounding_box(std::span<const Point> points) {
  if (points.empty()) return {};
  BBox b{points[0].x, points[0].y, points[0].x, points[0].y};
  for (const Point &p : points.subspan(1)) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

BBox union_box(const BBox &a, const BBox &b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

BBox shrink_box(const BBox &b, double amount) {
  BBox out{b.x0 + amount, b.y0 + amount, b.x1 - amount, b.y1 - amount};
  if (out.x0 > out.x1) out.x0 = out.x1 = 0.5 * (b.x0 + b.x1);
  if (out.y0 > out.y1) out.y0 = out.y1 = 0.5 * (b.y0 + b.y1);
  return out;
}

Quad quad_from_box(const BBox &b) {
  return {Point{b.x0, b.y0}, Point{b.x1, b.y0}, Point{b.x1, b.y1},
          Point{b.x0, b.y1}};
}

Quad normalize_quad(const Quad &q) {
  Point c{0, 0};
  for (const Point &p : q) {
    c.x += p.x / 4.0;
    c.y += p.y / 4.0;
  }
  Quad sorted = q;
  // atan2 grows clockwise on screen because y points down.
  std::sort(sorted.begin(), sorted.end(), [&](const Point &a, const Point &b) {
    return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
  });
  size_t start = 0;
  for (size_t i = 1; i < 4; ++i) {
    const double si = sorted[i].x + sorted[i].y;
    const double ss = sorted[start].x + sorted[start].y;
    if (si < ss || (si == ss && sorted[i].y < sorted[start].y)) start = i;
  }
  Quad out;
  for (size_t i = 0; i < 4; ++i) out[i] = sorted[(start + i) % 4];
  return out;
}

bool quad_is_degenerate(const Quad &q, double eps) {
  const BBox b = bounding_box(q);
  const double scale = std::max(1.0, b.width() * b.width() + b.height() * b.height());
  for (size_t skip = 0; skip < 4; ++skip) {
    std::array<Point, 3> tri;
    size_t k = 0;
    for (size_t i = 0; i < 4; ++i) {
      if (i != skip) tri[k++] = q[i];
    }
    if (std::abs(Cross(tri[0], tri[1], tri[2])) <= eps * scale) return true;
  }
  return false;
}

Quad expand_quad(const Quad &q, double unclip_ratio) {
  if (unclip_ratio < 0.0) {
    Fail(ErrorCode::kConfigError, "unclip_ratio must be non-negative");
  }
  const double area = polygon_area(q);
  const double perimeter = polygon_perimeter(q);
  if (area <= 1e-12 || perimeter <= 0.0) {
    Fail(ErrorCode::kDegenerateGeometry, "cannot expand a zero-area quad");
  }
  if (unclip_ratio == 0.0) return q;

  const double d = area * unclip_ratio / perimeter;
  const double orient = SignedArea(q) > 0.0 ? 1.0 : -1.0;

  // Offset line for each edge i (q[i] -> q[i+1]): point + direction.
  std::array<Point, 4> base;
  std::array<Point, 4> dir;
  std::array<Point, 4> normal;
  for (size_t i = 0; i < 4; ++i) {
    const Point a = q[i];
    const Point b = q[(i + 1) % 4];
    const double len = Dist(a, b);
    dir[i] = {(b.x - a.x) / len, (b.y - a.y) / len};
    normal[i] = {orient * dir[i].y, -orient * dir[i].x};
    base[i] = {a.x + normal[i].x * d, a.y + normal[i].y * d};
  }

  Quad out;
  for (size_t i = 0; i < 4; ++i) {
    const size_t prev = (i + 3) % 4;
    // Solve base[prev] + s*dir[prev] == base[i] + t*dir[i].
    const double det = dir[prev].x * (-dir[i].y) - dir[prev].y * (-dir[i].x);
    if (std::abs(det) < 1e-12) {
      out[i] = {q[i].x + normal[i].x * d, q[i].y + normal[i].y * d};
      continue;
    }
    const double rx = base[i].x - base[prev].x;
    const double ry = base[i].y - base[prev].y;
    const double s = (rx * (-dir[i].y) - ry * (-dir[i].x)) / det;
    out[i] = {base[prev].x + s * dir[prev].x, base[prev].y + s * dir[prev].y};
  }
  return out;
}

Homography homography_between(const Quad &src, const Quad &dst) {
  if (quad_is_degenerate(src) || quad_is_degenerate(dst)) {
    Fail(ErrorCode::kDegenerateGeometry,
         "homography needs four corners with no three collinear");
  }
  // Normalize the source for conditioning: centroid to origin, mean
  // distance sqrt(2).
  Point c{0, 0};
  for (const Point &p : src) {
    c.x += p.x / 4.0;
    c.y += p.y / 4.0;
  }
  double mean = 0.0;
  for (const Point &p : src) mean += Dist(p, c) / 4.0;
  const double s = std::sqrt(2.0) / mean;

  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> rhs;
  for (int i = 0; i < 4; ++i) {
    const double x = (src[i].x - c.x) * s;
    const double y = (src[i].y - c.y) * s;
    const double u = dst[i].x;
    const double v = dst[i].y;
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    rhs(2 * i) = u;
    rhs(2 * i + 1) = v;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible()) {
    Fail(ErrorCode::kDegenerateGeometry, "perspective system is singular");
  }
  const Eigen::Matrix<double, 8, 1> h = lu.solve(rhs);

  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  Eigen::Matrix3d t;
  t << s, 0, -s * c.x, 0, s, -s * c.y, 0, 0, 1;
  Eigen::Matrix3d full = hn * t;

  Homography out;
  for (int r = 0; r < 3; ++r) {
    for (int col = 0; col < 3; ++col) out.m[r * 3 + col] = full(r, col);
  }
  return out;
}

Homography perspective_homography(const Quad &src, double dst_w, double dst_h) {
  if (!(dst_w > 0.0) || !(dst_h > 0.0)) {
    Fail(ErrorCode::kDegenerateGeometry, "destination size must be positive");
  }
  const Quad dst{Point{0, 0}, Point{dst_w, 0}, Point{dst_w, dst_h},
                 Point{0, dst_h}};
  return homography_between(src, dst);
}

}  // namespace ocrkit
