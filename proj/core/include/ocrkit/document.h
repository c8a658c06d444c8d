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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ocrkit/geometry.h"
#include "ocrkit/image.h"

namespace ocrkit {

enum class LineOrientation { kDeg0, kDeg180 };

struct TextLine {
  Quad geometry{};
  std::string text;
  double score = 0.0;
  LineOrientation orientation = LineOrientation::kDeg0;
};

enum class Category {
  kText,
  kTitle,
  kTable,
  kFormula,
  kChart,
  kImage,
  kSealText,
  kCaption,
  kHeader,
  kFooter,
  kOther,
};

inline constexpr int kCategoryCount = 11;

std::string_view CategoryName(Category c);
std::optional<Category> ParseCategory(std::string_view name);

struct LayoutBlock {
  BBox bbox;
  Category category = Category::kText;
  double score = 0.0;
  std::optional<int> region_id;
  std::optional<int> order_index;
};

// Item payloads, one per recognized category.
struct TextContent {
  std::string text;
};
struct TitleContent {
  std::string text;
  int level = 1;
};
struct TableContent {
  std::string html;
};
struct FormulaContent {
  std::string latex;
};
struct ChartContent {
  std::string markdown_table;
};
struct ImageContent {
  std::string path;
  std::shared_ptr<const Image> crop;
};
struct SealContent {
  std::string text;
};
struct CaptionContent {
  std::string text;
};

using ItemContent = std::variant<TextContent, TitleContent, TableContent, FormulaContent,
                                 ChartContent, ImageContent, SealContent, CaptionContent>;

struct DocumentItem {
  Category category = Category::kText;
  BBox bbox;
  int page_index = 0;
  int order_index = 0;
  std::optional<int> region_id;
  ItemContent content;
  // order_index values of linked items on the same page (caption <-> target).
  std::vector<int> links;
};

// Main textual payload of an item: text, html, latex, markdown or image path.
std::string ContentString(const DocumentItem &item);

struct Page {
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<DocumentItem> items;
  std::vector<TextLine> text_lines;
};

struct Document {
  std::vector<Page> pages;
  std::map<std::string, std::string> source;
};

}  // namespace ocrkit
