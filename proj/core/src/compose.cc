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

#include "ocrkit/compose.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "ocrkit/error.h"

namespace ocrkit::compose {
namespace {

std::string FormatFixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s = buf;
  // Rounding can leave a negative zero such as "-0.00".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void Dump(const Json &v, int decimals, std::string &out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto &[key, val] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        Dump(val, key == "score" ? 4 : 2, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        Dump(v[i], decimals, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) Fail(ErrorCode::kIoError, "cannot serialize a non-finite number");
      out += FormatFixed(d, decimals);
      break;
    }
    default:
      out += v.dump(-1, ' ', false, Json::error_handler_t::replace);
  }
}

Json BoxJson(const BBox &b) { return Json::array({b.x0, b.y0, b.x1, b.y1}); }

std::string ImageTitle(const std::string &caption) {
  std::string out;
  for (char c : caption) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

}  // namespace

bool IsCaptionTarget(Category c) {
  return c == Category::kTable || c == Category::kImage || c == Category::kChart;
}

std::vector<CaptionLink> link_captions(std::span<const DocumentItem> items) {
  // (distance, target below caption, caption, target)
  std::vector<std::tuple<double, bool, size_t, size_t>> candidates;
  for (size_t c = 0; c < items.size(); ++c) {
    if (items[c].category != Category::kCaption) continue;
    for (size_t t = 0; t < items.size(); ++t) {
      const DocumentItem &target = items[t];
      if (!IsCaptionTarget(target.category) || target.page_index != items[c].page_index ||
          target.region_id != items[c].region_id) {
        continue;
      }
      const BBox &cb = items[c].bbox;
      const BBox &tb = target.bbox;
      const bool above = tb.y0 + tb.y1 <= cb.y0 + cb.y1;
      const double gap = above ? cb.y0 - tb.y1 : tb.y0 - cb.y1;
      candidates.emplace_back(std::max(0.0, gap), !above, c, t);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> caption_used(items.size(), false);
  std::vector<bool> target_used(items.size(), false);
  std::vector<CaptionLink> links;
  for (const auto &[dist, below, c, t] : candidates) {
    if (caption_used[c] || target_used[t]) continue;
    caption_used[c] = target_used[t] = true;
    links.push_back({c, t, dist});
  }
  std::sort(links.begin(), links.end(),
            [](const CaptionLink &a, const CaptionLink &b) { return a.caption_index < b.caption_index; });
  return links;
}

void ApplyCaptionLinks(std::vector<DocumentItem> &items, std::span<const CaptionLink> links) {
  for (const CaptionLink &l : links) {
    items[l.caption_index].links.push_back(items[l.target_index].order_index);
    items[l.target_index].links.push_back(items[l.caption_index].order_index);
  }
}

std::string ImageCropName(int page_index, int item_index) {
  return "page" + std::to_string(page_index) + "_item" + std::to_string(item_index) + ".png";
}

std::string PageMarkdown(const Page &page, const MarkdownOptions &opts) {
  std::vector<const DocumentItem *> ordered;
  for (const DocumentItem &it : page.items) ordered.push_back(&it);
  std::stable_sort(ordered.begin(), ordered.end(), [](const DocumentItem *a, const DocumentItem *b) {
    return a->order_index < b->order_index;
  });

  const auto caption_for = [&](const DocumentItem &it) -> std::string {
    for (int link : it.links) {
      for (const DocumentItem &other : page.items) {
        if (other.order_index == link && other.category == Category::kCaption) {
          return ContentString(other);
        }
      }
    }
    return "";
  };

  std::vector<std::string> blocks;
  for (const DocumentItem *it : ordered) {
    if (!opts.include_header_footer &&
        (it->category == Category::kHeader || it->category == Category::kFooter)) {
      continue;
    }
    std::string block;
    if (const auto *t = std::get_if<TitleContent>(&it->content)) {
      block = std::string(std::max(1, t->level), '#') + " " + t->text + "\n";
    } else if (const auto *f = std::get_if<FormulaContent>(&it->content)) {
      block = "$$\n" + f->latex + "\n$$\n";
    } else if (const auto *tb = std::get_if<TableContent>(&it->content)) {
      block = tb->html + "\n";
    } else if (const auto *ch = std::get_if<ChartContent>(&it->content)) {
      block = ch->markdown_table;
      if (block.empty() || block.back() != '\n') block += '\n';
    } else if (const auto *img = std::get_if<ImageContent>(&it->content)) {
      const std::string caption = caption_for(*it);
      block = "![image](" + img->path;
      if (!caption.empty()) block += " \"" + ImageTitle(caption) + "\"";
      block += ")\n";
    } else if (const auto *s = std::get_if<SealContent>(&it->content)) {
      if (s->text.empty()) continue;
      block = "*" + s->text + "*\n";
    } else {
      const std::string text = ContentString(*it);
      if (text.empty()) continue;
      block = text + "\n";
    }
    blocks.push_back(std::move(block));
  }
  std::string md;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) md += '\n';
    md += blocks[i];
  }
  return md;
}

std::string emit_markdown(const Document &doc, const MarkdownOptions &opts) {
  std::string md;
  for (const Page &p : doc.pages) {
    const std::string page_md = PageMarkdown(p, opts);
    if (page_md.empty()) continue;
    if (!md.empty()) md += '\n';
    md += page_md;
  }
  return md;
}

Json PageToJson(const Page &page) {
  Json items = Json::array();
  for (const DocumentItem &it : page.items) {
    Json links = Json::array();
    for (int l : it.links) links.push_back(l);
    items.push_back(Json{{"category", std::string(CategoryName(it.category))},
                         {"bbox", BoxJson(it.bbox)},
                         {"order", it.order_index},
                         {"content", ContentString(it)},
                         {"links", links}});
  }
  Json lines = Json::array();
  for (const TextLine &l : page.text_lines) {
    Json quad = Json::array();
    for (const Point &p : l.geometry) quad.push_back(Json::array({p.x, p.y}));
    lines.push_back(Json{{"quad", quad},
                         {"text", l.text},
                         {"score", l.score},
                         {"orientation", l.orientation == LineOrientation::kDeg0 ? 0 : 180}});
  }
  return Json{{"index", page.index},
              {"width", page.width},
              {"height", page.height},
              {"items", items},
              {"text_lines", lines}};
}

Json DocumentToJson(const Document &doc) {
  Json pages = Json::array();
  for (const Page &p : doc.pages) pages.push_back(PageToJson(p));
  return Json{{"version", kSchemaVersion}, {"pages", pages}};
}

std::string CanonicalDump(const Json &value) {
  std::string out;
  Dump(value, 2, out);
  return out;
}

std::string Canonicalize(std::string_view text) {
  Json parsed;
  try {
    parsed = Json::parse(text);
  } catch (const Json::exception &e) {
    Fail(ErrorCode::kDecodeError, std::string("invalid JSON: ") + e.what());
  }
  return CanonicalDump(parsed);
}

std::string emit_json(const Document &doc) { return CanonicalDump(DocumentToJson(doc)); }

}  // namespace ocrkit::compose
