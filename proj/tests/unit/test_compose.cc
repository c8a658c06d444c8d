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
#include <set>

#include "doctest.h"
#include "ocrkit/compose.h"
#include "test_util.h"

namespace ocrkit::compose {
namespace {

using testing::Rng;
using testing::UniformInt;

DocumentItem Item(Category c, BBox box, ItemContent content, int order = 0,
                  std::optional<int> region = 0) {
  DocumentItem it;
  it.category = c;
  it.bbox = box;
  it.order_index = order;
  it.region_id = region;
  it.content = std::move(content);
  return it;
}

Document OnePage(std::vector<DocumentItem> items) {
  Document doc;
  Page p;
  p.width = 600;
  p.height = 800;
  p.items = std::move(items);
  doc.pages.push_back(std::move(p));
  return doc;
}

TEST_CASE("link_captions examples") {
  const std::vector<DocumentItem> pair = {
      Item(Category::kImage, {0, 0, 10, 10}, ImageContent{"a.png", nullptr}),
      Item(Category::kCaption, {0, 11, 10, 13}, CaptionContent{"Figure 1"})};
  const auto links = link_captions(pair);
  REQUIRE(links.size() == 1);
  CHECK(links[0].caption_index == 1);
  CHECK(links[0].target_index == 0);
  CHECK(links[0].distance == doctest::Approx(1));

  const std::vector<DocumentItem> none = {Item(Category::kText, {0, 0, 10, 10}, TextContent{"x"}),
                                          Item(Category::kCaption, {0, 11, 10, 13}, CaptionContent{"c"})};
  CHECK(link_captions(none).empty());

  const std::vector<DocumentItem> both = {
      Item(Category::kImage, {0, 30, 10, 40}, ImageContent{"below.png", nullptr}),
      Item(Category::kCaption, {0, 20, 10, 25}, CaptionContent{"c"}),
      Item(Category::kChart, {0, 0, 10, 15}, ChartContent{"| a |\n| --- |"})};
  const auto above = link_captions(both);
  REQUIRE(above.size() == 1);
  CHECK(above[0].target_index == 2);
}

TEST_CASE("captions stay in their region and link one to one") {
  const std::vector<DocumentItem> items = {
      Item(Category::kTable, {0, 0, 10, 10}, TableContent{"<table></table>"}, 0, 1),
      Item(Category::kCaption, {0, 11, 10, 13}, CaptionContent{"a"}, 1, 0),
      Item(Category::kCaption, {0, 14, 10, 16}, CaptionContent{"b"}, 2, 1),
      Item(Category::kCaption, {0, 17, 10, 19}, CaptionContent{"c"}, 3, 1)};
  const auto links = link_captions(items);
  REQUIRE(links.size() == 1);
  CHECK(links[0].caption_index == 2);

  std::vector<DocumentItem> applied = items;
  ApplyCaptionLinks(applied, links);
  CHECK(applied[0].links == std::vector<int>{2});
  CHECK(applied[2].links == std::vector<int>{0});
  CHECK(applied[3].links.empty());
}

TEST_CASE("caption links form a partial matching") {
  Rng rng(53);
  const Category cats[] = {Category::kCaption, Category::kCaption, Category::kImage,
                           Category::kTable, Category::kChart, Category::kText};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<DocumentItem> items;
    for (int i = UniformInt(rng, 0, 10); i > 0; --i) {
      const double y = UniformInt(rng, 0, 300);
      const Category c = cats[UniformInt(rng, 0, 5)];
      items.push_back(Item(c, {0, y, 50, y + UniformInt(rng, 1, 40)}, TextContent{"t"},
                           static_cast<int>(items.size()), UniformInt(rng, 0, 1)));
    }
    std::set<size_t> captions;
    std::set<size_t> targets;
    for (const CaptionLink &l : link_captions(items)) {
      CHECK(captions.insert(l.caption_index).second);
      CHECK(targets.insert(l.target_index).second);
      CHECK(items[l.caption_index].category == Category::kCaption);
      CHECK(IsCaptionTarget(items[l.target_index].category));
      CHECK(items[l.caption_index].region_id == items[l.target_index].region_id);
      CHECK(l.distance >= 0);
    }
  }
}

TEST_CASE("emit_markdown examples") {
  CHECK(emit_markdown(OnePage({Item(Category::kText, {}, TextContent{"hello"})})) == "hello\n");
  CHECK(emit_markdown(OnePage({Item(Category::kTitle, {}, TitleContent{"Intro", 1})})) ==
        "# Intro\n");
  CHECK(emit_markdown(OnePage({Item(Category::kFormula, {}, FormulaContent{"E=mc^2"})})) ==
        "$$\nE=mc^2\n$$\n");
  CHECK(emit_markdown(OnePage({Item(Category::kTitle, {}, TitleContent{"Sub", 2})})) ==
        "## Sub\n");
  CHECK(emit_markdown(OnePage({Item(Category::kSealText, {}, SealContent{"OK"})})) == "*OK*\n");
  CHECK(emit_markdown(Document{}).empty());
}

TEST_CASE("emit_markdown layout of mixed items") {
  std::vector<DocumentItem> items = {
      Item(Category::kHeader, {}, TextContent{"running head"}, 0),
      Item(Category::kTable, {}, TableContent{"<table><tr><td>1</td></tr></table>"}, 2),
      Item(Category::kImage, {}, ImageContent{"imgs/page0_item3.png", nullptr}, 3),
      Item(Category::kCaption, {}, CaptionContent{"Figure \"2\""}, 4),
      Item(Category::kChart, {}, ChartContent{"| a |\n| --- |\n| 1 |"}, 1),
      Item(Category::kFooter, {}, TextContent{"7"}, 5)};
  items[2].links = {4};
  items[3].links = {3};
  const Document doc = OnePage(items);
  CHECK(emit_markdown(doc) ==
        "| a |\n| --- |\n| 1 |\n\n<table><tr><td>1</td></tr></table>\n\n"
        "![image](imgs/page0_item3.png \"Figure \\\"2\\\"\")\n\nFigure \"2\"\n");
  const std::string with_edges = emit_markdown(doc, {true});
  CHECK(with_edges.rfind("running head\n\n", 0) == 0);
  CHECK(with_edges.size() - with_edges.rfind("\n7\n") == 3);
  CHECK(ImageCropName(0, 3) == "page0_item3.png");
}

TEST_CASE("markdown preserves order_index order") {
  Rng rng(59);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = UniformInt(rng, 1, 12);
    std::vector<int> orders(n);
    for (int i = 0; i < n; ++i) orders[i] = i;
    std::shuffle(orders.begin(), orders.end(), rng);
    std::vector<DocumentItem> items;
    for (int i = 0; i < n; ++i) {
      items.push_back(Item(i % 2 ? Category::kTitle : Category::kText, {},
                           i % 2 ? ItemContent(TitleContent{"tok" + std::to_string(orders[i]) + "z", 1})
                                 : ItemContent(TextContent{"tok" + std::to_string(orders[i]) + "z"}),
                           orders[i]));
    }
    const std::string md = emit_markdown(OnePage(items));
    size_t last = 0;
    for (int k = 0; k < n; ++k) {
      const size_t pos = md.find("tok" + std::to_string(k) + "z");
      REQUIRE(pos != std::string::npos);
      CHECK(pos >= last);
      last = pos;
    }
  }
}

TEST_CASE("emit_json examples") {
  CHECK(emit_json(Document{}) == "{\"version\":\"1\",\"pages\":[]}");
  Document doc = OnePage({Item(Category::kText, {1, 2.5, 3.126, 4}, TextContent{"a\"b"}, 0)});
  TextLine line;
  line.geometry = quad_from_box({1, 2, 3, 4});
  line.text = "a";
  line.score = 0.98765;
  doc.pages[0].text_lines.push_back(line);
  const std::string json = emit_json(doc);
  CHECK(json ==
        "{\"version\":\"1\",\"pages\":[{\"index\":0,\"width\":600,\"height\":800,\"items\":"
        "[{\"category\":\"text\",\"bbox\":[1.00,2.50,3.13,4.00],\"order\":0,\"content\":"
        "\"a\\\"b\",\"links\":[]}],\"text_lines\":[{\"quad\":[[1.00,2.00],[3.00,2.00],"
        "[3.00,4.00],[1.00,4.00]],\"text\":\"a\",\"score\":0.9877,\"orientation\":0}]}]}");
  const Json parsed = Json::parse(json);
  std::vector<std::string> keys;
  for (const auto &[k, v] : parsed["pages"][0]["items"][0].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"category", "bbox", "order", "content", "links"});
  CHECK(testing::ErrorOf([] { Canonicalize("{"); }) == ErrorCode::kDecodeError);
}

TEST_CASE("emit_json is a canonical fixpoint") {
  Rng rng(61);
  const std::string alphabet = "aZ \"\\\n\t<&\xc3\xa9";
  for (int trial = 0; trial < 300; ++trial) {
    Document doc;
    for (int p = UniformInt(rng, 0, 2); p > 0; --p) {
      Page page;
      page.index = static_cast<int>(doc.pages.size());
      page.width = UniformInt(rng, 1, 2000);
      page.height = UniformInt(rng, 1, 2000);
      for (int i = UniformInt(rng, 0, 5); i > 0; --i) {
        std::string text;
        for (int k = UniformInt(rng, 0, 6); k > 0; --k) {
          text += alphabet[UniformInt(rng, 0, static_cast<int>(alphabet.size()) - 1)];
        }
        const double x = testing::Uniform(rng, -1, 500);
        page.items.push_back(Item(Category::kText, {x, x / 3, x + 7.777, x + 1e-3},
                                  TextContent{text}, static_cast<int>(page.items.size())));
      }
      doc.pages.push_back(page);
    }
    const std::string once = emit_json(doc);
    CHECK(Canonicalize(once) == once);
    CHECK(emit_json(doc) == once);
  }
}

}  // namespace
}  // namespace ocrkit::compose
