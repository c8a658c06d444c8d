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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrkit/diagnostics.h"
#include "ocrkit/document.h"
#include "ocrkit/image.h"

namespace ocrkit::kie {

// A window over the document text stream (items in reading order, joined
// with newlines). `begin` counts code points from the start of the item the
// chunk starts in; the window may continue into later items.
struct Chunk {
  std::string text;
  int page_index = 0;
  int item_index = 0;
  size_t begin = 0;
  size_t end = 0;
};

// Text an item contributes to retrieval. Tables give their cell texts joined
// by spaces; images give nothing.
std::string ItemText(const DocumentItem &item);

std::vector<Chunk> chunk_document(const Document &doc, size_t max_chars = 512,
                                  size_t overlap = 64);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<float> Embed(const std::string &text) = 0;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string Complete(const std::string &prompt) = 0;
};

class MllmClient {
 public:
  virtual ~MllmClient() = default;
  virtual std::string Ask(const Image &image, const std::string &question) = 0;
};

class VectorIndex {
 public:
  void Add(std::vector<float> vec, Chunk chunk);
  size_t size() const { return chunks_.size(); }
  size_t dimension() const { return dim_; }
  const Chunk &chunk(size_t i) const { return chunks_[i]; }
  const std::vector<float> &vector(size_t i) const { return vectors_[i]; }

 private:
  size_t dim_ = 0;
  std::vector<std::vector<float>> vectors_;
  std::vector<Chunk> chunks_;
};

VectorIndex build_index(std::span<const Chunk> chunks, Embedder &embedder);

struct Retrieved {
  size_t chunk_index = 0;
  double score = 0.0;
};

double CosineSimilarity(std::span<const float> a, std::span<const float> b);

// Exact top-k by cosine similarity; ties keep chunk order.
std::vector<Retrieved> retrieve(const VectorIndex &index, Embedder &embedder,
                                const std::string &query, int k);

inline constexpr const char *kEmptyValue = "N/A";

struct PromptTemplate {
  std::string preamble = "You extract key information from document text.";
  std::string context_header = "### Context";
  std::string chunk_delimiter = "---";
  std::string question_header = "### Questions";
  // "{empty}" is replaced by kEmptyValue.
  std::string format_instruction =
      "Answer with exactly one line per question in the form \"key: value\". "
      "Use \"{empty}\" as the value when the context does not contain the answer.";
};

std::string build_prompt(std::span<const std::string> keys, std::span<const Chunk> chunks,
                         const PromptTemplate &tmpl = {});

// Question sent to the multimodal client for one key.
std::string ImageQuestion(const std::string &key);

enum class AnswerSource { kTextPath, kImagePath, kFused };
std::string_view AnswerSourceName(AnswerSource s);

struct KieAnswer {
  std::string key;
  std::string value;
  AnswerSource source = AnswerSource::kTextPath;
  std::optional<std::string> alternate;
  std::vector<size_t> chunk_refs;

  friend bool operator==(const KieAnswer &, const KieAnswer &) = default;
};

// Reads "key: value" lines (ASCII or full-width colon, key matched
// case-insensitively). Missing keys and the empty marker become "".
std::vector<KieAnswer> ParseAnswers(std::span<const std::string> keys,
                                    const std::string &completion, AnswerSource source,
                                    Diagnostics *diag = nullptr);

std::vector<KieAnswer> fuse_results(std::span<const KieAnswer> text,
                                    std::span<const KieAnswer> image);

struct KieClients {
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<LlmClient> llm;
  std::shared_ptr<MllmClient> mllm;
};

struct KieOptions {
  size_t max_chars = 512;
  size_t overlap = 64;
  int top_k = 5;
  int parallelism = 1;
  PromptTemplate prompt;
};

struct KieResult {
  std::vector<KieAnswer> answers;
  std::vector<std::string> warnings;
  std::string prompt;
};

KieResult extract(const Document &doc, std::span<const Image> pages,
                  std::span<const std::string> keys, const KieClients &clients, bool use_mllm,
                  const KieOptions &opts = {});

double recall_at_1(std::span<const KieAnswer> pred,
                   const std::map<std::string, std::string> &gt);
// "85.55%" style.
std::string FormatPercent(double value);

// Deterministic test doubles.

// Bag of hashed character trigrams; equal texts embed identically.
class HashingEmbedder : public Embedder {
 public:
  explicit HashingEmbedder(size_t dim = 64) : dim_(dim) {}
  std::vector<float> Embed(const std::string &text) override;

 private:
  size_t dim_;
};

// Looks texts up in a fixed table; unknown texts map to the zero vector.
class TableEmbedder : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, std::vector<float>> table, size_t dim)
      : table_(std::move(table)), dim_(dim) {}
  std::vector<float> Embed(const std::string &text) override;

 private:
  std::map<std::string, std::vector<float>> table_;
  size_t dim_;
};

// Answers each question by copying a matching "key: value" line from the
// prompt's context section.
class EchoLlm : public LlmClient {
 public:
  std::string Complete(const std::string &prompt) override;
};

// Returns canned answers keyed by extraction key.
class ScriptedMllm : public MllmClient {
 public:
  explicit ScriptedMllm(std::map<std::string, std::string> answers)
      : answers_(std::move(answers)) {}
  std::string Ask(const Image &image, const std::string &question) override;

 private:
  std::map<std::string, std::string> answers_;
};

// Client configuration shared by the chat, multimodal and retriever slots.
struct ClientConfig {
  std::string module_name;
  std::string model_name;
  std::string base_url;
  // "openai" for an OpenAI-compatible HTTP endpoint, "mock" for test doubles.
  std::string api_type = "mock";
  std::string api_key;
  int timeout_seconds = 60;
};

std::shared_ptr<LlmClient> MakeLlmClient(const ClientConfig &cfg);
std::shared_ptr<MllmClient> MakeMllmClient(const ClientConfig &cfg,
                                           std::map<std::string, std::string> mock_answers = {});
std::shared_ptr<Embedder> MakeEmbedder(const ClientConfig &cfg);

}  // namespace ocrkit::kie
