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
#include <set>

#include "ocrkit/error.h"
#include "ocrkit/ocr.h"

namespace ocrkit::ocr {

Charset::Charset(std::vector<std::string> graphemes) : graphemes_(std::move(graphemes)) {
  std::set<std::string_view> seen;
  for (const std::string &g : graphemes_) {
    if (g.empty()) Fail(ErrorCode::kConfigError, "charset contains an empty grapheme");
    if (!seen.insert(g).second) {
      Fail(ErrorCode::kConfigError, "charset contains duplicate grapheme '" + g + "'");
    }
  }
}

Charset Charset::FromString(std::string_view content) {
  std::vector<std::string> graphemes;
  size_t pos = 0;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string line(content.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    graphemes.push_back(std::move(line));
    pos = end + 1;
  }
  return Charset(std::move(graphemes));
}

Charset Charset::FromFile(const std::filesystem::path &path) {
  return FromString(ReadTextFile(path));
}

const std::string &Charset::grapheme(size_t class_index) const {
  if (class_index == 0 || class_index > graphemes_.size()) {
    Fail(ErrorCode::kShapeMismatch,
         "class index " + std::to_string(class_index) + " has no grapheme");
  }
  return graphemes_[class_index - 1];
}

LogitsSequence LogitsSequence::FromTensor(const Tensor &t) {
  const auto &s = t.shape();
  if (!(t.rank() == 2 || (t.rank() == 3 && s[0] == 1))) {
    Fail(ErrorCode::kShapeMismatch, "logits must have shape [T, C] or [1, T, C]");
  }
  LogitsSequence out;
  out.steps = static_cast<int>(s[s.size() - 2]);
  out.classes = static_cast<int>(s[s.size() - 1]);
  out.values = t.ToFloat();
  return out;
}

size_t ArgMax(std::span<const float> scores) {
  if (scores.empty()) Fail(ErrorCode::kShapeMismatch, "cannot take argmax of no scores");
  size_t best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

Rotation DocRotationFromScores(std::span<const float> scores) {
  if (scores.size() != 4) {
    Fail(ErrorCode::kShapeMismatch, "document orientation expects 4 scores");
  }
  return RotationFromDegrees(static_cast<int>(ArgMax(scores)) * 90);
}

LineOrientation LineOrientationFromScores(std::span<const float> scores) {
  if (scores.size() != 2) Fail(ErrorCode::kShapeMismatch, "line orientation expects 2 scores");
  return ArgMax(scores) == 0 ? LineOrientation::kDeg0 : LineOrientation::kDeg180;
}

DecodedText ctc_greedy_decode(const LogitsSequence &logits, const Charset &cs) {
  if (logits.classes != static_cast<int>(cs.size())) {
    Fail(ErrorCode::kShapeMismatch, "logits have " + std::to_string(logits.classes) +
                                        " classes but the charset has " +
                                        std::to_string(cs.size()));
  }
  if (logits.values.size() != static_cast<size_t>(logits.steps) * logits.classes) {
    Fail(ErrorCode::kShapeMismatch, "logits buffer does not match steps x classes");
  }
  DecodedText out;
  double prob_sum = 0.0;
  int prev = -1;
  for (int t = 0; t < logits.steps; ++t) {
    const auto row = logits.row(t);
    const int id = static_cast<int>(ArgMax(row));
    if (id != 0 && id != prev) {
      out.text += cs.grapheme(static_cast<size_t>(id));
      out.class_ids.push_back(id);
      const bool probabilities =
          std::all_of(row.begin(), row.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
      double p = row[id];
      if (!probabilities) {
        double denom = 0.0;
        for (float v : row) denom += std::exp(static_cast<double>(v) - row[id]);
        p = 1.0 / denom;
      }
      prob_sum += p;
    }
    prev = id;
  }
  if (!out.class_ids.empty()) {
    out.score = std::clamp(prob_sum / static_cast<double>(out.class_ids.size()), 0.0, 1.0);
  }
  return out;
}

}  // namespace ocrkit::ocr
