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
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "ocrkit/kie.h"
#include "ocrkit/text.h"
#include "test_util.h"

namespace ocrkit::kie {
namespace {

using testing::ErrorOf;
using testing::Rng;
using testing::UniformInt;

Document TextDoc(std::vector<std::string> texts) {
  Document doc;
  Page p;
  for (size_t i = 0; i < texts.size(); ++i) {
    DocumentItem it;
    it.order_index = static_cast<int>(i);
    it.content = TextContent{texts[i]};
    p.items.push_back(it);
  }
  doc.pages.push_back(p);
  return doc;
}

std::string Words(size_t chars) {
  std::string s;
  for (size_t i = 0; s.size() < chars; ++i) s += (i % 5 == 4) ? ' ' : static_cast<char>('a' + i % 26);
  return s.substr(0, chars);
}

KieAnswer Answer(std::string key, std::string value, AnswerSource src) {
  return {std::move(key), std::move(value), src, std::nullopt, {}};
}

class FailingLlm : public LlmClient {
 public:
  std::string Complete(const std::string &) override {
    Fail(ErrorCode::kClientFailure, "chat endpoint is down");
  }
};

TEST_CASE("chunk_document examples") {
  CHECK(chunk_document(Document{}).empty());
  CHECK(chunk_document(TextDoc({Words(100)})).size() == 1);

  const std::string body = Words(1000);
  const auto chunks = chunk_document(TextDoc({body}), 512, 64);
  REQUIRE(chunks.size() >= 2);
  std::vector<bool> covered(body.size(), false);
  for (size_t k = 0; k < chunks.size(); ++k) {
    CHECK(chunks[k].begin <= 448 * k);
    CHECK(chunks[k].end - chunks[k].begin <= 512);
    CHECK(body.substr(chunks[k].begin, chunks[k].end - chunks[k].begin) == chunks[k].text);
    for (size_t i = chunks[k].begin; i < chunks[k].end; ++i) covered[i] = true;
  }
  CHECK(chunks[0].begin == 0);
  CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
  CHECK(ErrorOf([] { chunk_document(Document{}, 64, 64); }) == ErrorCode::kConfigError);
}

TEST_CASE("chunks cover the text stream with bounded size") {
  Rng rng(67);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> texts;
    for (int i = UniformInt(rng, 1, 4); i > 0; --i) texts.push_back(Words(UniformInt(rng, 1, 400)));
    const size_t max_chars = UniformInt(rng, 20, 200);
    const size_t overlap = UniformInt(rng, 0, static_cast<int>(max_chars) - 1);
    std::string stream;
    for (const auto &t : texts) stream += (stream.empty() ? "" : "\n") + t;
    const auto chunks = chunk_document(TextDoc(texts), max_chars, overlap);
    size_t pos = 0;
    for (const Chunk &c : chunks) {
      CHECK_FALSE(c.text.empty());
      CHECK(c.text.size() <= max_chars);
      const size_t at = stream.find(c.text, pos > overlap ? pos - overlap : 0);
      REQUIRE(at != std::string::npos);
      CHECK(at <= pos);
      pos = at + c.text.size();
    }
    CHECK(pos == stream.size());
  }
}

TEST_CASE("tables contribute cell texts") {
  DocumentItem table;
  table.category = Category::kTable;
  table.content = TableContent{"<table><tr><td>a &amp; b</td><td colspan=2> c </td><td></td></tr></table>"};
  CHECK(ItemText(table) == "a & b c");
  DocumentItem image;
  image.content = ImageContent{"x.png", nullptr};
  CHECK(ItemText(image).empty());
}

TEST_CASE("build_index and retrieve examples") {
  HashingEmbedder embedder;
  const VectorIndex empty = build_index({}, embedder);
  CHECK(empty.size() == 0);
  CHECK(retrieve(empty, embedder, "anything", 3).empty());

  const auto chunks = chunk_document(TextDoc({"alpha beta"}), 6, 0);
  const VectorIndex index = build_index(chunks, embedder);
  CHECK(index.size() == chunks.size());
  const auto hits = retrieve(index, embedder, chunks[1].text, 1);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].chunk_index == 1);
  CHECK(hits[0].score == doctest::Approx(1.0));

  TableEmbedder table({{"x", {1, 0}}, {"y", {0.6f, 0.8f}}, {"z", {0, 1}}, {"q", {1, 0}}}, 2);
  const std::vector<Chunk> xyz = {{"x"}, {"y"}, {"z"}, {"unknown"}};
  const VectorIndex vi = build_index(xyz, table);
  const auto ranked = retrieve(vi, table, "q", 4);
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].score == doctest::Approx(1.0));
  CHECK(ranked[1].score == doctest::Approx(0.6));
  CHECK(ranked[2].score == doctest::Approx(0.0));
  CHECK(ranked[2].chunk_index == 2);
  CHECK(ranked[3].chunk_index == 3);
  CHECK(ErrorOf([&] { retrieve(vi, table, "q", 0); }) == ErrorCode::kConfigError);

  TableEmbedder mixed({{"a", {1, 0}}, {"b", {1, 0, 0}}}, 2);
  const std::vector<Chunk> ab = {{"a"}, {"b"}};
  CHECK(ErrorOf([&] { build_index(ab, mixed); }) == ErrorCode::kEmbedderFailure);
}

TEST_CASE("retrieve scores are non-increasing and bounded by k") {
  Rng rng(71);
  HashingEmbedder embedder(16);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Chunk> chunks;
    for (int i = UniformInt(rng, 0, 12); i > 0; --i) chunks.push_back({Words(UniformInt(rng, 1, 30))});
    const VectorIndex index = build_index(chunks, embedder);
    const int k = UniformInt(rng, 1, 15);
    const auto hits = retrieve(index, embedder, Words(UniformInt(rng, 1, 20)), k);
    CHECK(hits.size() == std::min<size_t>(k, chunks.size()));
    for (size_t i = 1; i < hits.size(); ++i) {
      CHECK(hits[i].score <= hits[i - 1].score);
      if (hits[i].score == hits[i - 1].score) CHECK(hits[i].chunk_index > hits[i - 1].chunk_index);
    }
  }
}

TEST_CASE("build_prompt") {
  const std::vector<std::string> keys = {"number"};
  const std::vector<Chunk> chunks = {{"number: 42"}};
  const std::string p = build_prompt(keys, chunks);
  const size_t ctx = p.find("number: 42");
  const size_t q = p.find("- number");
  REQUIRE(ctx != std::string::npos);
  REQUIRE(q != std::string::npos);
  CHECK(ctx < q);
  CHECK(p.find(kEmptyValue) != std::string::npos);
  CHECK(build_prompt(keys, chunks) == p);
  const std::string bare = build_prompt(keys, {});
  CHECK(bare.find("### Context\n\n### Questions\n- number\n") != std::string::npos);
  CHECK(ErrorOf([] { build_prompt({}, {}); }) == ErrorCode::kConfigError);
}

TEST_CASE("ParseAnswers") {
  const std::vector<std::string> keys = {"Name", "Date", "Total"};
  Diagnostics diag;
  const auto a = ParseAnswers(keys, "name: Ada\r\n- DATE\xEF\xBC\x9A 2024-01-02\ntotal: N/A\n",
                              AnswerSource::kTextPath, &diag);
  CHECK(a[0].value == "Ada");
  CHECK(a[1].value == "2024-01-02");
  CHECK(a[2].value.empty());
  CHECK(diag.warnings().empty());
  const auto none = ParseAnswers(keys, "I cannot help", AnswerSource::kTextPath, &diag);
  CHECK(none[0].value.empty());
  CHECK(diag.warnings().size() == 1);
}

TEST_CASE("fuse_results examples and idempotence") {
  const std::vector<KieAnswer> t = {Answer("a", "42", AnswerSource::kTextPath),
                                    Answer("b", "", AnswerSource::kTextPath),
                                    Answer("c", "41", AnswerSource::kTextPath),
                                    Answer("d", " Hello  World", AnswerSource::kTextPath)};
  const std::vector<KieAnswer> i = {Answer("c", "42", AnswerSource::kImagePath),
                                    Answer("b", "42", AnswerSource::kImagePath),
                                    Answer("a", "42", AnswerSource::kImagePath),
                                    Answer("d", "hello world", AnswerSource::kImagePath)};
  const auto f = fuse_results(t, i);
  CHECK(f[0].value == "42");
  CHECK(f[0].source == AnswerSource::kFused);
  CHECK(f[1].value == "42");
  CHECK(f[1].source == AnswerSource::kImagePath);
  CHECK(f[2].value == "41");
  CHECK(f[2].alternate == "42");
  CHECK(f[2].source == AnswerSource::kTextPath);
  CHECK(f[3].source == AnswerSource::kFused);
  CHECK(fuse_results(f, f) == f);
  const std::vector<KieAnswer> other = {Answer("z", "", AnswerSource::kImagePath)};
  CHECK(ErrorOf([&] { fuse_results(t, other); }) == ErrorCode::kKeyMismatch);
}

TEST_CASE("fusion is idempotent on random answers") {
  Rng rng(73);
  const std::string values[] = {"", "1", "2", " 1 ", "A", "a"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<KieAnswer> t;
    std::vector<KieAnswer> im;
    for (int k = UniformInt(rng, 1, 5); k > 0; --k) {
      const std::string key = "k" + std::to_string(k);
      t.push_back(Answer(key, values[UniformInt(rng, 0, 5)], AnswerSource::kTextPath));
      im.push_back(Answer(key, values[UniformInt(rng, 0, 5)], AnswerSource::kImagePath));
    }
    std::shuffle(im.begin(), im.end(), rng);
    const auto f = fuse_results(t, im);
    CHECK(fuse_results(f, f) == f);
  }
}

struct KieRig {
  Document doc = TextDoc({"Invoice", "Number: INV-7", "Date: 2025-03-01", "Total: 99.10"});
  std::vector<Image> pages{Image(8, 8, 255)};
  std::vector<std::string> keys{"Number", "Date", "Total", "Vendor"};
  KieClients clients{std::make_shared<HashingEmbedder>(), std::make_shared<EchoLlm>(),
                     std::make_shared<ScriptedMllm>(std::map<std::string, std::string>{
                         {"Number", "INV-7"}, {"Total", "99.00"}, {"Vendor", "Acme"}})};
};

TEST_CASE("extract: text path, image path and degradation") {
  KieRig rig;
  const KieResult text_only = extract(rig.doc, rig.pages, rig.keys, rig.clients, false);
  REQUIRE(text_only.answers.size() == 4);
  CHECK(text_only.answers[0].value == "INV-7");
  CHECK(text_only.answers[1].value == "2025-03-01");
  CHECK(text_only.answers[3].value.empty());
  for (const KieAnswer &a : text_only.answers) {
    CHECK(a.source == AnswerSource::kTextPath);
    if (!a.value.empty()) CHECK(text_only.prompt.find(a.value) != std::string::npos);
  }

  const KieResult both = extract(rig.doc, rig.pages, rig.keys, rig.clients, true);
  CHECK(both.answers[0].source == AnswerSource::kFused);
  CHECK(both.answers[2].value == "99.10");
  CHECK(both.answers[2].alternate == "99.00");
  CHECK(both.answers[3].value == "Acme");
  CHECK(both.answers[3].source == AnswerSource::kImagePath);
  CHECK(both.warnings.empty());

  KieClients broken = rig.clients;
  broken.llm = std::make_shared<FailingLlm>();
  const KieResult degraded = extract(rig.doc, rig.pages, rig.keys, broken, true);
  CHECK(degraded.warnings.size() == 1);
  for (const KieAnswer &a : degraded.answers) CHECK(a.source == AnswerSource::kImagePath);
  CHECK(ErrorOf([&] { extract(rig.doc, rig.pages, rig.keys, broken, false); }) ==
        ErrorCode::kClientFailure);
  broken.mllm = nullptr;
  CHECK(ErrorOf([&] { extract(rig.doc, rig.pages, rig.keys, broken, true); }) ==
        ErrorCode::kClientFailure);

  KieClients no_mllm = rig.clients;
  no_mllm.mllm = nullptr;
  const KieResult text_fallback = extract(rig.doc, rig.pages, rig.keys, no_mllm, true);
  CHECK(text_fallback.warnings.size() == 1);
  CHECK(text_fallback.answers[0].source == AnswerSource::kTextPath);
}

TEST_CASE("extract is deterministic with deterministic clients") {
  KieRig rig;
  KieOptions opts;
  opts.parallelism = 4;
  const KieResult a = extract(rig.doc, rig.pages, rig.keys, rig.clients, true, opts);
  for (int i = 0; i < 5; ++i) {
    const KieResult b = extract(rig.doc, rig.pages, rig.keys, rig.clients, true, opts);
    CHECK(b.answers == a.answers);
    CHECK(b.prompt == a.prompt);
  }
}

TEST_CASE("recall_at_1") {
  const std::map<std::string, std::string> gt = {{"a", "1"}, {"b", "2"}, {"c", "Three  X"}, {"d", "4"}};
  const std::vector<KieAnswer> pred = {
      Answer("a", "1", AnswerSource::kTextPath), Answer("b", "2", AnswerSource::kTextPath),
      Answer("c", " three x", AnswerSource::kTextPath), Answer("d", "5", AnswerSource::kTextPath)};
  CHECK(recall_at_1(pred, gt) == doctest::Approx(75.0));
  CHECK(FormatPercent(recall_at_1(pred, gt)) == "75.00%");
  std::vector<KieAnswer> empty = pred;
  for (auto &a : empty) a.value.clear();
  CHECK(recall_at_1(empty, gt) == 0.0);
  CHECK(FormatPercent(85.55) == "85.55%");
  CHECK(FormatPercent(100.0 * 1711 / 2000) == "85.55%");
  CHECK(ErrorOf([&] { recall_at_1(std::vector<KieAnswer>(pred.begin(), pred.begin() + 3), gt); }) ==
        ErrorCode::kKeyMismatch);
}

TEST_CASE("recall_at_1 is bounded and order invariant") {
  Rng rng(79);
  for (int trial = 0; trial < 300; ++trial) {
    std::map<std::string, std::string> gt;
    std::vector<KieAnswer> pred;
    for (int k = UniformInt(rng, 1, 8); k > 0; --k) {
      const std::string key = "k" + std::to_string(k);
      gt[key] = std::to_string(UniformInt(rng, 0, 2));
      pred.push_back(Answer(key, std::to_string(UniformInt(rng, 0, 2)), AnswerSource::kTextPath));
    }
    const double r = recall_at_1(pred, gt);
    CHECK(r >= 0.0);
    CHECK(r <= 100.0);
    std::shuffle(pred.begin(), pred.end(), rng);
    CHECK(recall_at_1(pred, gt) == r);
  }
}

TEST_CASE("HTTP clients speak the OpenAI-compatible protocol") {
  using nlohmann::json;
  httplib::Server server;
  std::string auth;
  json last_chat;
  server.Post("/v1/chat/completions", [&](const httplib::Request &req, httplib::Response &res) {
    auth = req.get_header_value("Authorization");
    last_chat = json::parse(req.body);
    const auto &content = last_chat["messages"][0]["content"];
    const std::string reply = content.is_string() ? "Number: INV-7" : "ACME";
    res.set_content(json{{"choices", {{{"message", {{"content", reply}}}}}}}.dump(),
                    "application/json");
  });
  server.Post("/v1/embeddings", [&](const httplib::Request &req, httplib::Response &res) {
    const std::string input = json::parse(req.body)["input"];
    res.set_content(json{{"data", {{{"embedding", {1.0, static_cast<double>(input.size())}}}}}}.dump(),
                    "application/json");
  });
  server.Post("/broken/chat/completions", [](const httplib::Request &, httplib::Response &res) {
    res.status = 500;
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ClientConfig cfg;
  cfg.api_type = "openai";
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1/";
  cfg.api_key = "secret";
  cfg.model_name = "chat-model";
  cfg.timeout_seconds = 5;
  CHECK(MakeLlmClient(cfg)->Complete("hi") == "Number: INV-7");
  CHECK(auth == "Bearer secret");
  CHECK(last_chat["model"] == "chat-model");
  CHECK(MakeMllmClient(cfg)->Ask(Image(4, 4, 0), "q") == "ACME");
  CHECK(last_chat["messages"][0]["content"][1]["image_url"]["url"].get<std::string>().rfind(
            "data:image/png;base64,", 0) == 0);
  CHECK(MakeEmbedder(cfg)->Embed("abc") == std::vector<float>{1.0f, 3.0f});

  ClientConfig broken = cfg;
  broken.base_url = "http://127.0.0.1:" + std::to_string(port) + "/broken";
  CHECK(ErrorOf([&] { MakeLlmClient(broken)->Complete("hi"); }) == ErrorCode::kClientFailure);
  ClientConfig keyless = cfg;
  keyless.api_key.clear();
  CHECK(ErrorOf([&] { MakeLlmClient(keyless); }) == ErrorCode::kClientFailure);
  ClientConfig unknown = cfg;
  unknown.api_type = "grpc";
  CHECK(ErrorOf([&] { MakeEmbedder(unknown); }) == ErrorCode::kConfigError);

  server.stop();
  thread.join();
}

}  // namespace
}  // namespace ocrkit::kie
