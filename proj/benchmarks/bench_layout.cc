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

#include "ocrkit/layout.h"

namespace ocrkit::layout {
namespace {

std::vector<LayoutBlock> Columns(int per_column) {
  std::vector<LayoutBlock> blocks;
  for (int col = 0; col < 2; ++col) {
    for (int i = 0; i < per_column; ++i) {
      const double x0 = 40 + col * 300;
      const double y0 = 60 + i * 30;
      blocks.push_back({{x0, y0, x0 + 260, y0 + 24}, Category::kText, 0.9, std::nullopt,
                        std::nullopt});
    }
  }
  return blocks;
}

void BM_RecoverReadingOrder(benchmark::State &state) {
  const auto blocks = Columns(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(recover_reading_order(blocks, OrderMode::kHorizontal, {}));
  }
}
BENCHMARK(BM_RecoverReadingOrder)->Arg(4)->Arg(32)->Arg(128);

}  // namespace
}  // namespace ocrkit::layout
