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

#include "ocrkit/items.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "ocrkit/error.h"
#include "ocrkit/ocr.h"
#include "ocrkit/ocr_pipeline.h"
#include "ocrkit/text.h"

namespace ocrkit::items {
namespace {

// Parses "<td colspan=K>" / "<td rowspan=K>"; returns 0 when not a span tag.
int SpanValue(std::string_view token, std::string_view attr) {
  const std::string prefix = "<td " + std::string(attr) + "=";
  if (!token.starts_with(prefix) || !token.ends_with(">")) return 0;
  const std::string_view digits = token.substr(prefix.size(), token.size() - prefix.size() - 1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || value < 1) return 0;
  return value;
}

[[noreturn]] void Mismatch(const std::string &msg) { Fail(ErrorCode::kStructureMismatch, msg); }

std::vector<std::string> SplitLines(std::string_view s) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find('\n', start);
    if (end == std::string_view::npos) end = s.size();
    std::string line(s.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

// Cells of a "| a | b |" row, or nullopt if the row is not pipe-delimited.
std::optional<std::vector<std::string>> PipeCells(std::string_view row) {
  const std::string t = text::Trim(row);
  if (t.size() < 2 || t.front() != '|' || t.back() != '|') return std::nullopt;
  std::vector<std::string> cells;
  std::string cur;
  for (size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] == '\\' && i + 2 < t.size() && t[i + 1] == '|') {
      cur += "\\|";
      ++i;
    } else if (t[i] == '|') {
      cells.push_back(text::Trim(cur));
      cur.clear();
    } else {
      cur += t[i];
    }
  }
  cells.push_back(text::Trim(cur));
  return cells;
}

bool IsSeparatorCell(std::string_view c) {
  if (c.empty()) return false;
  size_t i = 0;
  size_t j = c.size();
  if (c[i] == ':') ++i;
  if (j > i && c[j - 1] == ':') --j;
  if (i >= j) return false;
  return std::all_of(c.begin() + i, c.begin() + j, [](char ch) { return ch == '-'; });
}

Point Lerp(const Point &a, const Point &b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

Point AtParam(const std::vector<Point> &pts, double g) {
  const double clamped = std::clamp(g, 0.0, static_cast<double>(pts.size() - 1));
  const size_t i = std::min(static_cast<size_t>(clamped), pts.size() - 2);
  return Lerp(pts[i], pts[i + 1], clamped - i);
}

}  // namespace

std::string_view TableFrameName(TableFrame f) {
  return f == TableFrame::kWired ? "wired" : "wireless";
}

TableRoute route_table(std::span<const float> orientation_scores,
                       std::span<const float> frame_scores) {
  if (orientation_scores.size() != 4 || frame_scores.size() != 2) {
    Fail(ErrorCode::kShapeMismatch, "table classifier expects 4 orientation and 2 frame scores");
  }
  TableRoute route;
  route.orientation = RotationFromDegrees(90 * static_cast<int>(ocr::ArgMax(orientation_scores)));
  route.frame = ocr::ArgMax(frame_scores) == 0 ? TableFrame::kWired : TableFrame::kWireless;
  return route;
}

Image UprightTable(const Image &crop, const TableRoute &route) {
  return Rotate(crop, Inverse(route.orientation));
}

StructureTokens TokensFromIds(std::span<const int64_t> ids) {
  StructureTokens out;
  for (int64_t id : ids) {
    switch (id) {
      case kTokTableOpen: out.emplace_back("<table>"); break;
      case kTokTableClose: out.emplace_back("</table>"); break;
      case kTokRowOpen: out.emplace_back("<tr>"); break;
      case kTokRowClose: out.emplace_back("</tr>"); break;
      case kTokCellOpen: out.emplace_back("<td>"); break;
      case kTokCellClose: out.emplace_back("</td>"); break;
      default:
        if (id > kTokColspanBase && id < kTokRowspanBase) {
          out.push_back("<td colspan=" + std::to_string(id - kTokColspanBase) + ">");
        } else if (id > kTokRowspanBase && id < kTokRowspanBase + 100) {
          out.push_back("<td rowspan=" + std::to_string(id - kTokRowspanBase) + ">");
        } else {
          Mismatch("unknown structure token id " + std::to_string(id));
        }
    }
  }
  return out;
}

StructureTokens TokenizeStructure(std::string_view html) {
  StructureTokens out;
  size_t pos = 0;
  while (pos < html.size()) {
    if (std::isspace(static_cast<unsigned char>(html[pos]))) {
      ++pos;
      continue;
    }
    if (html[pos] != '<') Mismatch("text outside a structure tag");
    const size_t end = html.find('>', pos);
    if (end == std::string_view::npos) Mismatch("unterminated structure tag");
    out.emplace_back(html.substr(pos, end - pos + 1));
    pos = end + 1;
  }
  return out;
}

bool IsCellOpen(std::string_view token) {
  return token == "<td>" || SpanValue(token, "colspan") > 0 || SpanValue(token, "rowspan") > 0;
}

size_t ValidateStructure(const StructureTokens &tokens) {
  if (tokens.empty()) Mismatch("empty structure");
  // 0 outside, 1 in table, 2 in row, 3 in cell
  int depth = 0;
  size_t cells = 0;
  bool closed = false;
  for (const std::string &t : tokens) {
    if (closed) Mismatch("tokens after </table>");
    if (t == "<table>") {
      if (depth != 0) Mismatch("nested <table>");
      depth = 1;
    } else if (t == "</table>") {
      if (depth != 1) Mismatch("unbalanced </table>");
      depth = 0;
      closed = true;
    } else if (t == "<tr>") {
      if (depth != 1) Mismatch("<tr> outside a table");
      depth = 2;
    } else if (t == "</tr>") {
      if (depth != 2) Mismatch("unbalanced </tr>");
      depth = 1;
    } else if (IsCellOpen(t)) {
      if (depth != 2) Mismatch("cell outside a row");
      depth = 3;
      ++cells;
    } else if (t == "</td>") {
      if (depth != 3) Mismatch("unbalanced </td>");
      depth = 2;
    } else {
      Mismatch("unsupported structure tag " + t);
    }
  }
  if (!closed) Mismatch("structure is not closed by </table>");
  return cells;
}

std::vector<int> match_lines_to_cells(std::span<const BBox> cells,
                                      std::span<const TextLine> lines) {
  std::vector<int> owner(lines.size(), -1);
  for (size_t li = 0; li < lines.size(); ++li) {
    const BBox lb = bounding_box(lines[li].geometry);
    double best = 0.0;
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const double c = coverage(lb, cells[ci]);
      if (c > best) {
        best = c;
        owner[li] = static_cast<int>(ci);
      }
    }
    if (best < kCellMinOverlap) owner[li] = -1;
  }
  return owner;
}

std::string assemble_table_html(const StructureTokens &tokens, std::span<const BBox> cells,
                                std::span<const TextLine> lines, Diagnostics *diag) {
  const size_t td = ValidateStructure(tokens);
  if (td != cells.size()) {
    Mismatch("structure has " + std::to_string(td) + " cells but " +
             std::to_string(cells.size()) + " cell boxes were detected");
  }
  const std::vector<int> owner = match_lines_to_cells(cells, lines);
  std::vector<std::vector<size_t>> members(cells.size());
  for (size_t li = 0; li < lines.size(); ++li) {
    if (owner[li] >= 0) {
      members[owner[li]].push_back(li);
    } else if (diag) {
      diag->Warn("table line \"" + lines[li].text + "\" matches no cell");
    }
  }
  std::vector<std::string> texts(cells.size());
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<size_t> &m = members[ci];
    std::stable_sort(m.begin(), m.end(), [&](size_t a, size_t b) {
      const BBox ba = bounding_box(lines[a].geometry);
      const BBox bb = bounding_box(lines[b].geometry);
      if (ba.y0 != bb.y0) return ba.y0 < bb.y0;
      return ba.x0 < bb.x0;
    });
    std::string joined;
    for (size_t li : m) {
      if (!joined.empty()) joined += ' ';
      joined += lines[li].text;
    }
    texts[ci] = text::EscapeHtml(joined);
  }

  std::string html;
  size_t cell = 0;
  for (const std::string &t : tokens) {
    html += t;
    if (IsCellOpen(t)) html += texts[cell++];
  }
  return html;
}

std::string ValidateFormula(std::string raw) {
  size_t tokens = 0;
  bool in_token = false;
  for (char c : raw) {
    const bool space = std::isspace(static_cast<unsigned char>(c));
    if (!space && !in_token) ++tokens;
    in_token = !space;
  }
  if (tokens > kFormulaMaxTokens) {
    throw ContentError(ErrorCode::kFormulaInvalid,
                       "formula has " + std::to_string(tokens) + " tokens, limit is " +
                           std::to_string(kFormulaMaxTokens),
                       std::move(raw));
  }
  long depth = 0;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\\') {
      ++i;
      continue;
    }
    if (raw[i] == '{') ++depth;
    if (raw[i] == '}' && --depth < 0) break;
  }
  if (depth != 0) {
    throw ContentError(ErrorCode::kFormulaInvalid, "formula braces are unbalanced",
                       std::move(raw));
  }
  return raw;
}

std::string ValidateChartTable(std::string raw) {
  std::vector<std::string> rows = SplitLines(raw);
  while (!rows.empty() && text::Trim(rows.back()).empty()) rows.pop_back();
  const auto invalid = [&](const std::string &why) {
    throw ContentError(ErrorCode::kChartInvalid, "chart output is not a pipe table: " + why,
                       raw);
  };
  if (rows.size() < 2) invalid("needs a header and a separator row");
  size_t columns = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto cells = PipeCells(rows[r]);
    if (!cells) invalid("row " + std::to_string(r + 1) + " is not pipe-delimited");
    if (r == 0) columns = cells->size();
    if (cells->size() != columns) invalid("row " + std::to_string(r + 1) + " is ragged");
    if (r == 1 && !std::all_of(cells->begin(), cells->end(),
                               [](const std::string &c) { return IsSeparatorCell(c); })) {
      invalid("second row is not a separator");
    }
  }
  return raw;
}

std::string recognize_formula(backends::InferenceSession &session,
                              const backends::ModelDescriptor &model, const Image &crop) {
  return ValidateFormula(ocr::RunImageModel(session, model, crop, "text").AsText());
}

std::string chart_to_table(backends::InferenceSession &session,
                           const backends::ModelDescriptor &model, const Image &crop) {
  return ValidateChartTable(ocr::RunImageModel(session, model, crop, "text").AsText());
}

double PolylineLength(std::span<const Point> line) {
  double total = 0.0;
  for (size_t i = 1; i < line.size(); ++i) {
    total += std::hypot(line[i].x - line[i - 1].x, line[i].y - line[i - 1].y);
  }
  return total;
}

std::vector<Point> ResamplePolyline(std::span<const Point> line, int n) {
  if (line.size() < 2 || n < 2) Fail(ErrorCode::kDegenerateGeometry, "polyline too short");
  std::vector<double> cum(line.size(), 0.0);
  for (size_t i = 1; i < line.size(); ++i) {
    cum[i] = cum[i - 1] + std::hypot(line[i].x - line[i - 1].x, line[i].y - line[i - 1].y);
  }
  const double total = cum.back();
  if (total <= 0.0) Fail(ErrorCode::kDegenerateGeometry, "polyline has zero length");
  std::vector<Point> out;
  out.reserve(n);
  size_t seg = 1;
  for (int k = 0; k < n; ++k) {
    const double target = total * k / (n - 1);
    while (seg + 1 < line.size() && cum[seg] < target) ++seg;
    const double len = cum[seg] - cum[seg - 1];
    const double t = len > 0.0 ? std::clamp((target - cum[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(Lerp(line[seg - 1], line[seg], t));
  }
  return out;
}

Image rectify_seal_text(const Polygon &poly, const Image &image) {
  if (poly.size() == 4) return ocr::crop_line(image, {poly[0], poly[1], poly[2], poly[3]});
  if (poly.size() < 6 || poly.size() % 2 != 0) {
    Fail(ErrorCode::kDegenerateGeometry,
         "seal polygon needs an even number of points, at least 6");
  }
  const size_t half = poly.size() / 2;
  const std::vector<Point> top_raw(poly.begin(), poly.begin() + half);
  const std::vector<Point> bottom_raw(poly.rbegin(), poly.rbegin() + half);
  const std::vector<Point> top = ResamplePolyline(top_raw, kSealResamplePoints);
  const std::vector<Point> bottom = ResamplePolyline(bottom_raw, kSealResamplePoints);

  double spacing = 0.0;
  for (int k = 0; k < kSealResamplePoints; ++k) {
    spacing += std::hypot(top[k].x - bottom[k].x, top[k].y - bottom[k].y);
  }
  const int w = static_cast<int>(std::lround((PolylineLength(top) + PolylineLength(bottom)) / 2));
  const int h = static_cast<int>(std::lround(spacing / kSealResamplePoints));
  if (w < 1 || h < 1) Fail(ErrorCode::kDegenerateGeometry, "seal band is thinner than a pixel");

  Image out(w, h);
  for (int u = 0; u < w; ++u) {
    const double g = (u + 0.5) / w * (kSealResamplePoints - 1);
    const Point a = AtParam(top, g);
    const Point b = AtParam(bottom, g);
    for (int v = 0; v < h; ++v) {
      const Point s = Lerp(a, b, (v + 0.5) / h);
      SampleBilinear(image, s.x, s.y, &out.at(u, v, 0));
    }
  }
  return out;
}

}  // namespace ocrkit::items
