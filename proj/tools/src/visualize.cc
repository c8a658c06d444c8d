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
#include <cstdlib>

#include "ocrkit_cli/cli.h"

namespace ocrkit::cli {
namespace {

void Plot(Image &img, int x, int y) {
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return;
  img.at(x, y, 0) = 230;
  img.at(x, y, 1) = 30;
  img.at(x, y, 2) = 30;
}

void DrawSegment(Image &img, Point a, Point b) {
  int x0 = static_cast<int>(std::lround(a.x));
  int y0 = static_cast<int>(std::lround(a.y));
  const int x1 = static_cast<int>(std::lround(b.x));
  const int y1 = static_cast<int>(std::lround(b.y));
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int e = dx + dy;
  while (true) {
    Plot(img, x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * e;
    if (e2 >= dy) {
      e += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      e += dx;
      y0 += sy;
    }
  }
}

}  // namespace

Image RenderLines(const Image &page, const std::vector<TextLine> &lines) {
  Image out = page;
  for (const TextLine &l : lines) {
    for (size_t i = 0; i < 4; ++i) DrawSegment(out, l.geometry[i], l.geometry[(i + 1) % 4]);
  }
  return out;
}

}  // namespace ocrkit::cli
