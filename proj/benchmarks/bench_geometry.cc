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


#include <benchmark/benchmark.h>

#include <random>

#include "ocrkit/geometry.h"

namespace ocrkit {
namespace {

void BM_Iou(benchmark::State &state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 100);
  std::vector<BBox> boxes;
  for (int i = 0; i < 1024; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    boxes.push_back({x, y, x + u(rng), y + u(rng)});
  }
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(iou(boxes[i & 1023], boxes[(i * 7 + 3) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Iou);

void BM_PerspectiveHomography(benchmark::State &state) {
  const Quad q = {Point{3, 2}, Point{120, 9}, Point{118, 40}, Point{1, 35}};
  for (auto _ : state) benchmark::DoNotOptimize(perspective_homography(q, 160, 32));
}
BENCHMARK(BM_PerspectiveHomography);

void BM_ExpandQuad(benchmark::State &state) {
  const Quad q = quad_from_box({10, 10, 200, 42});
  for (auto _ : state) benchmark::DoNotOptimize(expand_quad(q, 1.5));
}
BENCHMARK(BM_ExpandQuad);

}  // namespace
}  // namespace ocrkit
