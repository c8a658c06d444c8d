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

#include "ocrkit/kie.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "ocrkit/error.h"
#include "ocrkit/parallel.h"
#include "ocrkit/text.h"

namespace ocrkit::kie {
namespace {

constexpr std::string_view kFullWidthColon = "\xEF\xBC\x9A";

// Splits "key: value" at the first ASCII or full-width colon.
std::optional<std::pair<std::string, std::string>> SplitKeyValue(std::string_view line) {
  const size_t ascii = line.find(':');
  const size_t wide = line.find(kFullWidthColon);
  size_t pos = std::min(ascii, wide);
  if (pos == std::string_view::npos) return std::nullopt;
  const size_t sep = pos == wide ? kFullWidthColon.size() : 1;
  return std::make_pair(text::Trim(line.substr(0, pos)), text::Trim(line.substr(pos + sep)));
}

std::vector<std::string> Lines(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find('\n', start);
    if (end == std::string_view::npos) end = s.size();
    std::string line(s.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

std::string CleanAnswer(std::string_view raw) {
  std::string v = text::Trim(raw);
  if (text::NormalizeForMatch(v) == text::AsciiLower(kEmptyValue)) return "";
  return v;
}

uint64_t Fnv1a(std::u32string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (char32_t c : s) {
    for (int b = 0; b < 4; ++b) {
      h ^= (static_cast<uint32_t>(c) >> (8 * b)) & 0xFF;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace

std::string ItemText(const DocumentItem &item) {
  if (std::holds_alternative<ImageContent>(item.content)) return "";
  if (const auto *t = std::get_if<TableContent>(&item.content)) {
    std::vector<std::string> cells;
    std::string cur;
    bool in_cell = false;
    const std::string &html = t->html;
    for (size_t i = 0; i < html.size();) {
      if (html[i] == '<') {
        const size_t end = html.find('>', i);
        const std::string tag = html.substr(i, end == std::string::npos ? std::string::npos : end - i + 1);
        if (tag.starts_with("<td")) {
          in_cell = true;
          cur.clear();
        } else if (tag == "</td>") {
          const std::string cell = text::Trim(text::UnescapeHtml(cur));
          if (!cell.empty()) cells.push_back(cell);
          in_cell = false;
        }
        if (end == std::string::npos) break;
        i = end + 1;
      } else {
        if (in_cell) cur += html[i];
        ++i;
      }
    }
    std::string joined;
    for (const std::string &c : cells) {
      if (!joined.empty()) joined += ' ';
      joined += c;
    }
    return joined;
  }
  return ContentString(item);
}

std::vector<Chunk> chunk_document(const Document &doc, size_t max_chars, size_t overlap) {
  if (max_chars == 0 || overlap >= max_chars) {
    Fail(ErrorCode::kConfigError, "chunking requires max_chars > overlap >= 0");
  }
  // Stream of code points plus, per item, where it starts.
  std::u32string stream;
  struct Origin {
    size_t offset;
    int page;
    int item;
  };
  std::vector<Origin> origins;
  for (const Page &p : doc.pages) {
    std::vector<const DocumentItem *> ordered;
    for (const DocumentItem &it : p.items) ordered.push_back(&it);
    std::stable_sort(ordered.begin(), ordered.end(), [](auto *a, auto *b) {
      return a->order_index < b->order_index;
    });
    for (const DocumentItem *it : ordered) {
      const std::string t = ItemText(*it);
      if (text::Trim(t).empty()) continue;
      if (!stream.empty()) stream += U'\n';
      origins.push_back({stream.size(), p.index, it->order_index});
      stream += text::DecodeUtf8(t);
    }
  }

  std::vector<Chunk> chunks;
  const size_t n = stream.size();
  size_t start = 0;
  while (start < n) {
    size_t end = n;
    if (n - start > max_chars) {
      end = start + max_chars;
      for (size_t i = start + max_chars; i > start + overlap; --i) {
        if (text::IsSpace(stream[i])) {
          end = i;
          break;
        }
      }
    }
    const std::u32string_view window(stream.data() + start, end - start);
    if (std::any_of(window.begin(), window.end(), [](char32_t c) { return !text::IsSpace(c); })) {
      const auto it = std::upper_bound(origins.begin(), origins.end(), start,
                                       [](size_t s, const Origin &o) { return s < o.offset; });
      const Origin &o = it == origins.begin() ? origins.front() : *(it - 1);
      const size_t local = start >= o.offset ? start - o.offset : 0;
      chunks.push_back({text::EncodeUtf8(window), o.page, o.item, local, local + window.size()});
    }
    if (end >= n) break;
    start = end - overlap;
  }
  return chunks;
}

void VectorIndex::Add(std::vector<float> vec, Chunk chunk) {
  if (vec.empty()) Fail(ErrorCode::kEmbedderFailure, "embedder returned an empty vector");
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    Fail(ErrorCode::kEmbedderFailure, "embedding dimension changed from " +
                                          std::to_string(dim_) + " to " +
                                          std::to_string(vec.size()));
  }
  vectors_.push_back(std::move(vec));
  chunks_.push_back(std::move(chunk));
}

VectorIndex build_index(std::span<const Chunk> chunks, Embedder &embedder) {
  VectorIndex index;
  for (const Chunk &c : chunks) index.Add(embedder.Embed(c.text), c);
  return index;
}

double CosineSimilarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kEmbedderFailure, "cannot compare embeddings of different dimension");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Retrieved> retrieve(const VectorIndex &index, Embedder &embedder,
                                const std::string &query, int k) {
  if (k < 1) Fail(ErrorCode::kConfigError, "retrieval k must be at least 1");
  if (index.size() == 0) return {};
  const std::vector<float> q = embedder.Embed(query);
  if (q.size() != index.dimension()) {
    Fail(ErrorCode::kEmbedderFailure, "query embedding dimension does not match the index");
  }
  std::vector<Retrieved> all;
  for (size_t i = 0; i < index.size(); ++i) all.push_back({i, CosineSimilarity(index.vector(i), q)});
  std::stable_sort(all.begin(), all.end(),
                   [](const Retrieved &a, const Retrieved &b) { return a.score > b.score; });
  all.resize(std::min(all.size(), static_cast<size_t>(k)));
  return all;
}

std::string build_prompt(std::span<const std::string> keys, std::span<const Chunk> chunks,
                         const PromptTemplate &tmpl) {
  if (keys.empty()) Fail(ErrorCode::kConfigError, "at least one key is required");
  std::string p = tmpl.preamble + "\n\n" + tmpl.context_header + "\n";
  for (size_t i = 0; i < chunks.size(); ++i) {
    if (i) p += tmpl.chunk_delimiter + "\n";
    p += chunks[i].text + "\n";
  }
  p += "\n" + tmpl.question_header + "\n";
  for (const std::string &k : keys) p += "- " + k + "\n";
  std::string instruction = tmpl.format_instruction;
  for (size_t pos; (pos = instruction.find("{empty}")) != std::string::npos;) {
    instruction.replace(pos, 7, kEmptyValue);
  }
  p += "\n" + instruction + "\n";
  return p;
}

std::string ImageQuestion(const std::string &key) {
  return "What is the value of \"" + key + "\" in this document? Reply with the value only, or " +
         kEmptyValue + " if it is absent.";
}

std::string_view AnswerSourceName(AnswerSource s) {
  switch (s) {
    case AnswerSource::kTextPath: return "text";
    case AnswerSource::kImagePath: return "image";
    case AnswerSource::kFused: return "fused";
  }
  return "text";
}

std::vector<KieAnswer> ParseAnswers(std::span<const std::string> keys,
                                    const std::string &completion, AnswerSource source,
                                    Diagnostics *diag) {
  std::map<std::string, std::string> found;
  for (const std::string &line : Lines(completion)) {
    const auto kv = SplitKeyValue(line);
    if (!kv) continue;
    std::string key = kv->first;
    if (key.starts_with("- ")) key = text::Trim(key.substr(2));
    found.emplace(text::NormalizeForMatch(key), kv->second);
  }
  if (found.empty() && diag) diag->Warn("language model output has no \"key: value\" lines");
  std::vector<KieAnswer> out;
  for (const std::string &k : keys) {
    KieAnswer a{k, "", source, std::nullopt, {}};
    const auto it = found.find(text::NormalizeForMatch(k));
    if (it != found.end()) a.value = CleanAnswer(it->second);
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<KieAnswer> fuse_results(std::span<const KieAnswer> text,
                                    std::span<const KieAnswer> image) {
  const auto keyset = [](std::span<const KieAnswer> v) {
    std::multiset<std::string> s;
    for (const KieAnswer &a : v) s.insert(a.key);
    return s;
  };
  if (keyset(text) != keyset(image)) Fail(ErrorCode::kKeyMismatch, "answer key sets differ");

  std::vector<KieAnswer> out;
  std::vector<bool> used(image.size(), false);
  for (const KieAnswer &t : text) {
    size_t j = 0;
    while (used[j] || image[j].key != t.key) ++j;
    used[j] = true;
    const KieAnswer &im = image[j];
    const std::string tn = text::NormalizeForMatch(t.value);
    const std::string in = text::NormalizeForMatch(im.value);
    KieAnswer f = t;
    if (tn == in) {
      if (t.source != im.source) f.source = AnswerSource::kFused;
    } else if (tn.empty()) {
      f = im;
    } else if (!in.empty()) {
      f.alternate = im.value;
    }
    out.push_back(std::move(f));
  }
  return out;
}

KieResult extract(const Document &doc, std::span<const Image> pages,
                  std::span<const std::string> keys, const KieClients &clients, bool use_mllm,
                  const KieOptions &opts) {
  if (keys.empty()) Fail(ErrorCode::kConfigError, "at least one key is required");
  KieResult result;
  Diagnostics diag;

  std::optional<std::vector<KieAnswer>> text_answers;
  std::string text_error;
  try {
    if (!clients.llm || !clients.embedder) {
      Fail(ErrorCode::kClientFailure, "no language model or embedder configured");
    }
    const std::vector<Chunk> chunks = chunk_document(doc, opts.max_chars, opts.overlap);
    const VectorIndex index = build_index(chunks, *clients.embedder);
    std::string query;
    for (const std::string &k : keys) query += (query.empty() ? "" : " ") + k;
    const std::vector<Retrieved> hits = retrieve(index, *clients.embedder, query, opts.top_k);
    std::vector<Chunk> context;
    std::vector<size_t> refs;
    for (const Retrieved &h : hits) {
      context.push_back(index.chunk(h.chunk_index));
      refs.push_back(h.chunk_index);
    }
    result.prompt = build_prompt(keys, context, opts.prompt);
    text_answers =
        ParseAnswers(keys, clients.llm->Complete(result.prompt), AnswerSource::kTextPath, &diag);
    for (KieAnswer &a : *text_answers) a.chunk_refs = refs;
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kClientFailure && e.code() != ErrorCode::kEmbedderFailure) throw;
    text_error = e.what();
  }

  std::optional<std::vector<KieAnswer>> image_answers;
  std::string image_error;
  if (use_mllm) {
    try {
      if (!clients.mllm) Fail(ErrorCode::kClientFailure, "no multimodal client configured");
      std::vector<KieAnswer> answers(keys.size());
      ParallelFor(keys.size(), opts.parallelism, [&](size_t i) {
        answers[i] = {keys[i], "", AnswerSource::kImagePath, std::nullopt, {}};
        for (const Image &page : pages) {
          answers[i].value = CleanAnswer(clients.mllm->Ask(page, ImageQuestion(keys[i])));
          if (!answers[i].value.empty()) break;
        }
      });
      image_answers = std::move(answers);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kClientFailure) throw;
      image_error = e.what();
    }
  }

  if (!use_mllm) {
    if (!text_answers) Fail(ErrorCode::kClientFailure, "text path failed: " + text_error);
    result.answers = std::move(*text_answers);
  } else if (!text_answers && !image_answers) {
    Fail(ErrorCode::kClientFailure,
         "text path failed: " + text_error + "; image path failed: " + image_error);
  } else if (!text_answers) {
    diag.Warn("text path failed, using image answers only: " + text_error);
    result.answers = std::move(*image_answers);
  } else if (!image_answers) {
    diag.Warn("image path failed, using text answers only: " + image_error);
    result.answers = std::move(*text_answers);
  } else {
    result.answers = fuse_results(*text_answers, *image_answers);
  }
  result.warnings = diag.warnings();
  return result;
}

double recall_at_1(std::span<const KieAnswer> pred,
                   const std::map<std::string, std::string> &gt) {
  std::map<std::string, const KieAnswer *> by_key;
  for (const KieAnswer &a : pred) {
    if (!by_key.emplace(a.key, &a).second) {
      Fail(ErrorCode::kKeyMismatch, "duplicate predicted key " + a.key);
    }
  }
  if (gt.empty() || by_key.size() != gt.size()) {
    Fail(ErrorCode::kKeyMismatch, "predicted keys do not match ground-truth keys");
  }
  size_t hits = 0;
  for (const auto &[key, value] : gt) {
    const auto it = by_key.find(key);
    if (it == by_key.end()) Fail(ErrorCode::kKeyMismatch, "no prediction for key " + key);
    if (text::NormalizeForMatch(it->second->value) == text::NormalizeForMatch(value)) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(gt.size());
}

std::string FormatPercent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", value);
  return buf;
}

std::vector<float> HashingEmbedder::Embed(const std::string &text) {
  std::vector<float> v(dim_, 0.0f);
  const std::u32string s = text::DecodeUtf8(text::NormalizeForMatch(text));
  if (s.empty()) return v;
  const std::u32string padded = U" " + s + U" ";
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    v[Fnv1a(std::u32string_view(padded).substr(i, 3)) % dim_] += 1.0f;
  }
  return v;
}

std::vector<float> TableEmbedder::Embed(const std::string &text) {
  const auto it = table_.find(text);
  if (it == table_.end()) return std::vector<float>(dim_, 0.0f);
  return it->second;
}

std::string EchoLlm::Complete(const std::string &prompt) {
  const PromptTemplate tmpl;
  enum { kNone, kContext, kQuestions, kDone } state = kNone;
  std::vector<std::string> context;
  std::vector<std::string> keys;
  for (const std::string &line : Lines(prompt)) {
    if (line == tmpl.context_header) {
      state = kContext;
    } else if (line == tmpl.question_header) {
      state = kQuestions;
    } else if (state == kContext) {
      context.push_back(line);
    } else if (state == kQuestions) {
      if (line.starts_with("- ")) {
        keys.push_back(line.substr(2));
      } else if (!keys.empty()) {
        state = kDone;
      }
    }
  }
  std::string out;
  for (const std::string &k : keys) {
    std::string value = kEmptyValue;
    for (const std::string &line : context) {
      const auto kv = SplitKeyValue(line);
      if (kv && text::NormalizeForMatch(kv->first) == text::NormalizeForMatch(k) &&
          !kv->second.empty()) {
        value = kv->second;
        break;
      }
    }
    out += k + ": " + value + "\n";
  }
  return out;
}

std::string ScriptedMllm::Ask(const Image &, const std::string &question) {
  for (const auto &[key, answer] : answers_) {
    if (question == ImageQuestion(key)) return answer;
  }
  return kEmptyValue;
}

}  // namespace ocrkit::kie
