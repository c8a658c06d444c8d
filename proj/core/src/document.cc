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

#include "ocrkit/document.h"

#include <array>

namespace ocrkit {
namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "text",  "title",     "table",   "formula", "chart", "image",
    "seal",  "caption",   "header",  "footer",  "other"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view CategoryName(Category c) {
  return kCategoryNames[static_cast<size_t>(c)];
}

std::optional<Category> ParseCategory(std::string_view name) {
  for (size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<Category>(i);
  }
  if (name == "seal_text") return Category::kSealText;
  return std::nullopt;
}

std::string ContentString(const DocumentItem &item) {
  return std::visit(
      Overloaded{[](const TextContent &c) { return c.text; },
                 [](const TitleContent &c) { return c.text; },
                 [](const TableContent &c) { return c.html; },
                 [](const FormulaContent &c) { return c.latex; },
                 [](const ChartContent &c) { return c.markdown_table; },
                 [](const ImageContent &c) { return c.path; },
                 [](const SealContent &c) { return c.text; },
                 [](const CaptionContent &c) { return c.text; }},
      item.content);
}

}  // namespace ocrkit
