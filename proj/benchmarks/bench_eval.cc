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

#include "ocrkit/eval.h"

namespace ocrkit::eval {
namespace {

void BM_Levenshtein(benchmark::State &state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::string a;
  std::string b;
  for (size_t i = 0; i < n; ++i) {
    a += static_cast<char>('a' + i % 7);
    b += static_cast<char>('a' + (i * 3) % 7);
  }
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Levenshtein)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

}  // namespace
}  // namespace ocrkit::eval
