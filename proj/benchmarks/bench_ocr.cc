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

#include "ocrkit/ocr.h"

namespace ocrkit::ocr {
namespace {

// A 640x480 map with a grid of text-line rectangles.
ProbabilityMap LinesMap() {
  constexpr int kW = 640;
  constexpr int kH = 480;
  std::vector<float> v(kW * kH, 0.05f);
  for (int row = 0; row < 20; ++row) {
    for (int col = 0; col < 2; ++col) {
      const int x0 = 20 + col * 320;
      const int y0 = 10 + row * 23;
      for (int y = y0; y < y0 + 12; ++y) {
        for (int x = x0; x < x0 + 260; ++x) v[static_cast<size_t>(y) * kW + x] = 0.9f;
      }
    }
  }
  return ProbabilityMap(kW, kH, std::move(v));
}

void BM_ExtractTextRegions(benchmark::State &state) {
  const ProbabilityMap map = LinesMap();
  const DetectionParams p;
  for (auto _ : state) benchmark::DoNotOptimize(extract_text_regions(map, p));
  state.SetItemsProcessed(state.iterations() * map.width() * map.height());
}
BENCHMARK(BM_ExtractTextRegions)->Unit(benchmark::kMillisecond);

void BM_CtcGreedyDecode(benchmark::State &state) {
  std::vector<std::string> graphemes;
  for (char c = 'a'; c <= 'z'; ++c) graphemes.emplace_back(1, c);
  const Charset cs(graphemes);
  LogitsSequence l;
  l.steps = static_cast<int>(state.range(0));
  l.classes = static_cast<int>(cs.size());
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> u(-4, 4);
  l.values.resize(static_cast<size_t>(l.steps) * l.classes);
  for (float &x : l.values) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ctc_greedy_decode(l, cs));
}
BENCHMARK(BM_CtcGreedyDecode)->Arg(40)->Arg(320);

}  // namespace
}  // namespace ocrkit::ocr
