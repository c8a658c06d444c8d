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

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocrkit::eval {

struct EvalCase {
  std::string id;
  std::string scenario;
  std::string prediction;
  std::string ground_truth;
};

struct ScenarioScore {
  double mean = 0.0;
  size_t cases = 0;
};

struct EvalReport {
  std::map<std::string, ScenarioScore> scenarios;
  double overall = 0.0;
  size_t case_count = 0;
};

struct EvalOptions {
  // Collapse runs of whitespace (and trim) before scoring.
  bool collapse_whitespace = false;
};

// Unit-cost edit distance over Unicode scalar values.
size_t levenshtein(std::string_view a, std::string_view b);

// 1 - levenshtein / max(|pred|, |gt|); two empty strings score 1.
double one_minus_edit(std::string_view pred, std::string_view gt);

// Per-scenario mean, overall = mean of the scenario means.
EvalReport run_benchmark(std::span<const EvalCase> cases, const EvalOptions &opts = {});

// JSON Lines, one object per case: {"id", "scenario", "gt", "prediction"}
// where "prediction" is a text file path relative to the benchmark file.
// Inline predictions may be given as "prediction_text" instead.
std::vector<EvalCase> LoadBenchmark(const std::filesystem::path &path);

std::string ReportJson(const EvalReport &report);
std::string ReportTable(const EvalReport &report);

}  // namespace ocrkit::eval
