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

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocrkit/document.h"

namespace ocrkit::compose {

using Json = nlohmann::ordered_json;

struct CaptionLink {
  size_t caption_index = 0;
  size_t target_index = 0;
  double distance = 0.0;
};

bool IsCaptionTarget(Category c);

// Greedy one-to-one matching of Caption items to Table/Image/Chart items on
// the same page and in the same region, by ascending edge-to-edge vertical
// distance. At equal distance a target above the caption wins.
std::vector<CaptionLink> link_captions(std::span<const DocumentItem> items);

// Writes the links into DocumentItem::links (both directions, by order_index).
void ApplyCaptionLinks(std::vector<DocumentItem> &items, std::span<const CaptionLink> links);

struct MarkdownOptions {
  bool include_header_footer = false;
};

std::string emit_markdown(const Document &doc, const MarkdownOptions &opts = {});
std::string PageMarkdown(const Page &page, const MarkdownOptions &opts = {});

// Deterministic file name for an extracted image crop.
std::string ImageCropName(int page_index, int item_index);

inline constexpr const char *kSchemaVersion = "1";

Json DocumentToJson(const Document &doc);
Json PageToJson(const Page &page);

// Compact JSON with object keys in insertion order, integers verbatim,
// fractional numbers with two decimals ("score" keys with four).
std::string CanonicalDump(const Json &value);
// Parses and re-emits; a canonical text is a fixpoint of this function.
std::string Canonicalize(std::string_view text);

std::string emit_json(const Document &doc);

}  // namespace ocrkit::compose
