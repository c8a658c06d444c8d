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

#include "ocrkit/eval.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "ocrkit/compose.h"
#include "ocrkit/error.h"
#include "ocrkit/image.h"
#include "ocrkit/text.h"

namespace ocrkit::eval {

size_t levenshtein(std::string_view a, std::string_view b) {
  const std::u32string s = text::DecodeUtf8(a);
  const std::u32string t = text::DecodeUtf8(b);
  std::vector<size_t> row(t.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (size_t i = 1; i <= s.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= t.size(); ++j) {
      const size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[t.size()];
}

double one_minus_edit(std::string_view pred, std::string_view gt) {
  const size_t longest = std::max(text::CodePointCount(pred), text::CodePointCount(gt));
  if (longest == 0) return 1.0;
  const double score = 1.0 - static_cast<double>(levenshtein(pred, gt)) / longest;
  return std::clamp(score, 0.0, 1.0);
}

EvalReport run_benchmark(std::span<const EvalCase> cases, const EvalOptions &opts) {
  if (cases.empty()) Fail(ErrorCode::kEmptyBenchmark, "benchmark has no cases");
  std::map<std::string, std::vector<double>> per;
  for (const EvalCase &c : cases) {
    const double s = opts.collapse_whitespace
                         ? one_minus_edit(text::CollapseWhitespace(c.prediction),
                                          text::CollapseWhitespace(c.ground_truth))
                         : one_minus_edit(c.prediction, c.ground_truth);
    per[c.scenario].push_back(s);
  }
  EvalReport report;
  report.case_count = cases.size();
  double sum = 0.0;
  for (auto &[name, scores] : per) {
    // Sorting makes the floating-point sum independent of case order.
    std::sort(scores.begin(), scores.end());
    const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / scores.size();
    report.scenarios[name] = {mean, scores.size()};
    sum += mean;
  }
  report.overall = sum / per.size();
  return report;
}

std::vector<EvalCase> LoadBenchmark(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open benchmark file " + path.string());
  std::vector<EvalCase> cases;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      Fail(ErrorCode::kConfigError, where + ": " + e.what());
    }
    try {
      EvalCase c;
      c.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      c.scenario = j.at("scenario").get<std::string>();
      c.ground_truth = j.at("gt").get<std::string>();
      if (j.contains("prediction_text")) {
        c.prediction = j.at("prediction_text").get<std::string>();
      } else {
        std::filesystem::path pred = j.at("prediction").get<std::string>();
        if (pred.is_relative()) pred = path.parent_path() / pred;
        c.prediction = ReadTextFile(pred);
      }
      cases.push_back(std::move(c));
    } catch (const nlohmann::json::exception &e) {
      Fail(ErrorCode::kConfigError, where + ": " + e.what());
    }
  }
  return cases;
}

std::string ReportJson(const EvalReport &report) {
  compose::Json scenarios = compose::Json::object();
  for (const auto &[name, s] : report.scenarios) {
    scenarios[name] = {{"cases", s.cases}, {"score", s.mean}};
  }
  const compose::Json j = {{"version", compose::kSchemaVersion},
                           {"metric", "1-edit_distance"},
                           {"case_count", report.case_count},
                           {"overall", {{"score", report.overall}}},
                           {"scenarios", scenarios}};
  return compose::CanonicalDump(j);
}

std::string ReportTable(const EvalReport &report) {
  size_t width = std::string_view("scenario").size();
  for (const auto &[name, s] : report.scenarios) width = std::max(width, name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s  %6s  %s\n", static_cast<int>(width), "scenario", "cases",
                "1-EditDist");
  out += buf;
  for (const auto &[name, s] : report.scenarios) {
    std::snprintf(buf, sizeof(buf), "%-*s  %6zu  %.4f\n", static_cast<int>(width), name.c_str(),
                  s.cases, s.mean);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "%-*s  %6zu  %.4f\n", static_cast<int>(width), "overall",
                report.case_count, report.overall);
  out += buf;
  return out;
}

}  // namespace ocrkit::eval
