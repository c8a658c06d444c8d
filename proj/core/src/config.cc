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

#include "ocrkit/config.h"

#include <yaml-cpp/yaml.h>

#include <functional>
#include <map>
#include <set>

#include "ocrkit/error.h"
#include "ocrkit/image.h"

namespace ocrkit {
namespace {

namespace fs = std::filesystem;

class Reader {
 public:
  Reader(std::string source, fs::path base_dir)
      : source_(std::move(source)), base_dir_(std::move(base_dir)) {}

  [[noreturn]] void Error(const YAML::Node &node, const std::string &key,
                          const std::string &what) const {
    std::string where = source_;
    if (node.Mark().line >= 0) where += ":" + std::to_string(node.Mark().line + 1);
    Fail(ErrorCode::kConfigError, where + ": " + key + ": " + what);
  }

  // Visits every key of a mapping, rejecting the ones without a handler.
  void Section(const YAML::Node &node, const std::string &path,
               const std::map<std::string, std::function<void(const YAML::Node &,
                                                              const std::string &)>> &fields) const {
    if (!node || node.IsNull()) return;
    if (!node.IsMap()) Error(node, path, "expected a mapping");
    for (const auto &kv : node) {
      const std::string key = kv.first.as<std::string>();
      const std::string full = path.empty() ? key : path + "." + key;
      const auto it = fields.find(key);
      if (it == fields.end()) Error(kv.first, full, "unknown key");
      it->second(kv.second, full);
    }
  }

  template <class T>
  T Scalar(const YAML::Node &n, const std::string &key) const {
    if (!n.IsScalar()) Error(n, key, "expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception &) {
      Error(n, key, "has the wrong type");
    }
  }

  bool Bool(const YAML::Node &n, const std::string &key) const {
    const std::string s = Scalar<std::string>(n, key);
    const auto b = ParseBool(s);
    if (!b) Error(n, key, "expected true or false");
    return *b;
  }

  double Unit(const YAML::Node &n, const std::string &key) const {
    const double v = Scalar<double>(n, key);
    if (v < 0.0 || v > 1.0) Error(n, key, "must lie in [0, 1]");
    return v;
  }

  double NonNegative(const YAML::Node &n, const std::string &key) const {
    const double v = Scalar<double>(n, key);
    if (v < 0.0) Error(n, key, "must be non-negative");
    return v;
  }

  int AtLeast(const YAML::Node &n, const std::string &key, int lo) const {
    const int v = Scalar<int>(n, key);
    if (v < lo) Error(n, key, "must be at least " + std::to_string(lo));
    return v;
  }

  fs::path Path(const YAML::Node &n, const std::string &key) const {
    fs::path p = Scalar<std::string>(n, key);
    if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
    return p;
  }

 private:
  std::string source_;
  fs::path base_dir_;
};

using Handler = std::function<void(const YAML::Node &, const std::string &)>;
using Fields = std::map<std::string, Handler>;

void ReadClient(const Reader &r, const YAML::Node &node, const std::string &path,
                kie::ClientConfig &c) {
  r.Section(node, path,
            {{"module_name", [&](auto &n, auto &k) { c.module_name = r.Scalar<std::string>(n, k); }},
             {"model_name", [&](auto &n, auto &k) { c.model_name = r.Scalar<std::string>(n, k); }},
             {"base_url", [&](auto &n, auto &k) { c.base_url = r.Scalar<std::string>(n, k); }},
             {"api_type",
              [&](auto &n, auto &k) {
                c.api_type = r.Scalar<std::string>(n, k);
                if (c.api_type != "mock" && c.api_type != "openai") {
                  r.Error(n, k, "must be mock or openai");
                }
              }},
             {"api_key", [&](auto &n, auto &k) { c.api_key = r.Scalar<std::string>(n, k); }},
             {"timeout_seconds", [&](auto &n, auto &k) { c.timeout_seconds = r.AtLeast(n, k, 1); }}});
}

void ReadLayout(const Reader &r, const YAML::Node &node, const std::string &path,
                layout::LayoutParams &p) {
  r.Section(node, path,
            {{"score_thresh", [&](auto &n, auto &k) { p.score_thresh = r.Unit(n, k); }},
             {"nms_iou", [&](auto &n, auto &k) { p.nms_iou = r.Unit(n, k); }},
             {"containment_ratio", [&](auto &n, auto &k) { p.containment_ratio = r.Unit(n, k); }}});
}

backends::ModelDescriptor ReadModel(const Reader &r, const YAML::Node &node,
                                    const std::string &path, backends::ModelTask task) {
  backends::ModelDescriptor m;
  m.task = task;
  m.name = std::string(backends::ModelTaskName(task));
  r.Section(
      node, path,
      {{"name", [&](auto &n, auto &k) { m.name = r.Scalar<std::string>(n, k); }},
       {"artifact", [&](auto &n, auto &k) { m.artifact_path = r.Path(n, k); }},
       {"charset", [&](auto &n, auto &k) { m.charset_path = r.Path(n, k); }},
       {"backends",
        [&](const YAML::Node &n, const std::string &k) {
          if (!n.IsSequence()) r.Error(n, k, "expected a list of engine kinds");
          for (const auto &item : n) {
            const auto kind = backends::ParseEngineKind(r.Scalar<std::string>(item, k));
            if (!kind) r.Error(item, k, "unknown engine kind");
            m.backend_hints.insert(*kind);
          }
        }},
       {"inputs", [&](const YAML::Node &n, const std::string &k) {
          if (!n.IsSequence()) r.Error(n, k, "expected a list of tensor specs");
          for (const auto &item : n) {
            backends::TensorSpec spec;
            r.Section(item, k,
                      {{"name", [&](auto &v, auto &kk) { spec.name = r.Scalar<std::string>(v, kk); }},
                       {"dtype",
                        [&](auto &v, auto &kk) {
                          const std::string d = r.Scalar<std::string>(v, kk);
                          if (d == "f32") spec.dtype = DType::kF32;
                          else if (d == "f16") spec.dtype = DType::kF16;
                          else if (d == "i64") spec.dtype = DType::kI64;
                          else if (d == "u8") spec.dtype = DType::kU8;
                          else r.Error(v, kk, "unknown dtype");
                        }},
                       {"shape", [&](const YAML::Node &v, const std::string &kk) {
                          if (!v.IsSequence()) r.Error(v, kk, "expected a list of dimensions");
                          for (const auto &dim : v) spec.shape.push_back(r.Scalar<int64_t>(dim, kk));
                        }}});
            m.input_specs.push_back(std::move(spec));
          }
        }}});
  if (m.artifact_path.empty()) r.Error(node, path, "artifact is required");
  try {
    backends::ValidateDescriptor(m);
  } catch (const ocrkit::Error &e) {
    r.Error(node, path, e.what());
  }
  return m;
}

}  // namespace

std::optional<bool> ParseBool(std::string_view s) {
  if (s == "True" || s == "true") return true;
  if (s == "False" || s == "false") return false;
  return std::nullopt;
}

PipelineConfig ParseConfig(const std::string &yaml, const fs::path &base_dir,
                           const std::string &source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::ParserException &e) {
    Fail(ErrorCode::kConfigError, source_name + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  PipelineConfig cfg;
  const Reader r(source_name, base_dir);
  if (!root || root.IsNull()) return cfg;

  auto &st = cfg.structure;
  auto &ocr = st.ocr;
  r.Section(
      root, "",
      {{"version",
        [&](auto &n, auto &k) {
          if (r.Scalar<int>(n, k) != kConfigSchemaVersion) r.Error(n, k, "unsupported version");
        }},
       {"pipeline",
        [&](auto &node, auto &path) {
          r.Section(
              node, path,
              {{"use_doc_orientation_classify",
                [&](auto &n, auto &k) { ocr.use_doc_orientation_classify = r.Bool(n, k); }},
               {"use_doc_unwarping", [&](auto &n, auto &k) { ocr.use_doc_unwarping = r.Bool(n, k); }},
               {"use_textline_orientation",
                [&](auto &n, auto &k) { ocr.use_textline_orientation = r.Bool(n, k); }},
               {"use_region_detection",
                [&](auto &n, auto &k) { st.use_region_detection = r.Bool(n, k); }},
               {"use_table_recognition",
                [&](auto &n, auto &k) { st.use_table_recognition = r.Bool(n, k); }},
               {"use_formula_recognition",
                [&](auto &n, auto &k) { st.use_formula_recognition = r.Bool(n, k); }},
               {"use_chart_recognition",
                [&](auto &n, auto &k) { st.use_chart_recognition = r.Bool(n, k); }},
               {"use_seal_recognition",
                [&](auto &n, auto &k) { st.use_seal_recognition = r.Bool(n, k); }},
               {"rec_score_thresh", [&](auto &n, auto &k) { ocr.rec_score_thresh = r.Unit(n, k); }},
               {"order_mode",
                [&](auto &n, auto &k) {
                  st.order_mode = r.Scalar<std::string>(n, k);
                  if (st.order_mode != "auto" && !layout::ParseOrderMode(st.order_mode)) {
                    r.Error(n, k, "must be auto, horizontal or vertical");
                  }
                }},
               {"parallelism", [&](auto &n, auto &k) { ocr.parallelism = r.AtLeast(n, k, 1); }},
               {"include_header_footer",
                [&](auto &n, auto &k) { cfg.include_header_footer = r.Bool(n, k); }}});
        }},
       {"detection",
        [&](auto &node, auto &path) {
          auto &d = ocr.detection;
          r.Section(node, path,
                    {{"bin_thresh", [&](auto &n, auto &k) { d.bin_thresh = r.Unit(n, k); }},
                     {"box_thresh", [&](auto &n, auto &k) { d.box_score_thresh = r.Unit(n, k); }},
                     {"unclip_ratio", [&](auto &n, auto &k) { d.unclip_ratio = r.NonNegative(n, k); }},
                     {"min_box_side", [&](auto &n, auto &k) { d.min_box_side = r.NonNegative(n, k); }},
                     {"max_candidates",
                      [&](auto &n, auto &k) { d.max_candidates = r.AtLeast(n, k, 1); }}});
        }},
       {"layout", [&](auto &n, auto &k) { ReadLayout(r, n, k, st.layout); }},
       {"region", [&](auto &n, auto &k) { ReadLayout(r, n, k, st.region); }},
       {"cut",
        [&](auto &node, auto &path) {
          r.Section(node, path,
                    {{"min_gap", [&](auto &n, auto &k) { st.cut.min_gap = r.NonNegative(n, k); }},
                     {"shrink", [&](auto &n, auto &k) { st.cut.shrink = r.NonNegative(n, k); }}});
        }},
       {"backend",
        [&](auto &node, auto &path) {
          auto &b = cfg.backend;
          r.Section(node, path,
                    {{"device",
                      [&](auto &n, auto &k) {
                        b.device = r.Scalar<std::string>(n, k);
                        try {
                          backends::ParseDevice(b.device);
                        } catch (const ocrkit::Error &e) {
                          r.Error(n, k, e.what());
                        }
                      }},
                     {"fp16", [&](auto &n, auto &k) { b.fp16 = r.Bool(n, k); }},
                     {"threads", [&](auto &n, auto &k) { b.threads = r.AtLeast(n, k, 1); }},
                     {"model_dir", [&](auto &n, auto &k) { b.model_dir = r.Path(n, k); }}});
        }},
       {"models",
        [&](const YAML::Node &node, const std::string &path) {
          if (!node.IsMap()) r.Error(node, path, "expected a mapping of task to model");
          for (const auto &kv : node) {
            const std::string key = kv.first.as<std::string>();
            const auto task = backends::ParseModelTask(key);
            if (!task) r.Error(kv.first, path + "." + key, "unknown model task");
            cfg.explicit_models[*task] = ReadModel(r, kv.second, path + "." + key, *task);
          }
        }},
       {"serving",
        [&](auto &node, auto &path) {
          auto &s = cfg.serving;
          r.Section(node, path,
                    {{"host", [&](auto &n, auto &k) { s.host = r.Scalar<std::string>(n, k); }},
                     {"port",
                      [&](auto &n, auto &k) {
                        s.port = r.Scalar<int>(n, k);
                        if (s.port < 0 || s.port > 65535) r.Error(n, k, "is not a valid port");
                      }},
                     {"max_body_bytes",
                      [&](auto &n, auto &k) {
                        s.max_body_bytes = static_cast<size_t>(r.AtLeast(n, k, 1));
                      }},
                     {"timeout_seconds",
                      [&](auto &n, auto &k) { s.timeout_seconds = r.AtLeast(n, k, 1); }},
                     {"parallelism", [&](auto &n, auto &k) { s.parallelism = r.AtLeast(n, k, 1); }},
                     {"queue_limit", [&](auto &n, auto &k) { s.queue_limit = r.AtLeast(n, k, 0); }}});
        }},
       {"kie",
        [&](auto &node, auto &path) {
          auto &ki = cfg.kie;
          r.Section(node, path,
                    {{"max_chars",
                      [&](auto &n, auto &k) { ki.max_chars = static_cast<size_t>(r.AtLeast(n, k, 1)); }},
                     {"overlap",
                      [&](auto &n, auto &k) { ki.overlap = static_cast<size_t>(r.AtLeast(n, k, 0)); }},
                     {"top_k", [&](auto &n, auto &k) { ki.top_k = r.AtLeast(n, k, 1); }},
                     {"use_mllm", [&](auto &n, auto &k) { ki.use_mllm = r.Bool(n, k); }},
                     {"chat", [&](auto &n, auto &k) { ReadClient(r, n, k, ki.chat); }},
                     {"mllm", [&](auto &n, auto &k) { ReadClient(r, n, k, ki.mllm); }},
                     {"retriever", [&](auto &n, auto &k) { ReadClient(r, n, k, ki.retriever); }}});
          if (ki.overlap >= ki.max_chars) r.Error(node, path, "overlap must be below max_chars");
        }},
       {"pdf",
        [&](auto &node, auto &path) {
          r.Section(node, path,
                    {{"rasterizer",
                      [&](auto &n, auto &k) { cfg.pdf.command = r.Scalar<std::string>(n, k); }},
                     {"dpi", [&](auto &n, auto &k) { cfg.pdf.dpi = r.AtLeast(n, k, 1); }}});
        }}});
  return cfg;
}

PipelineConfig load_config(const fs::path &path) {
  if (!fs::exists(path)) Fail(ErrorCode::kConfigError, "config file " + path.string() + " not found");
  return ParseConfig(ReadTextFile(path), path.parent_path(), path.string());
}

ocr::ModelBindings DiscoverModels(const fs::path &model_dir) {
  ocr::ModelBindings out;
  std::error_code ec;
  if (!fs::is_directory(model_dir, ec)) return out;
  for (int t = 0; t <= static_cast<int>(backends::ModelTask::kSeal); ++t) {
    const auto task = static_cast<backends::ModelTask>(t);
    const std::string name(backends::ModelTaskName(task));
    backends::ModelDescriptor m;
    m.name = name;
    m.task = task;
    if (fs::is_directory(model_dir / name, ec)) {
      m.artifact_path = model_dir / (name + std::string(backends::ArtifactExtension(
                                                 backends::EngineKind::kStub)));
    } else {
      for (backends::EngineKind k : backends::kAllEngineKinds) {
        const fs::path candidate = model_dir / (name + std::string(backends::ArtifactExtension(k)));
        if (fs::exists(candidate, ec)) {
          m.artifact_path = candidate;
          break;
        }
      }
    }
    if (m.artifact_path.empty()) continue;
    if (task == backends::ModelTask::kTextRec) m.charset_path = model_dir / "charset.txt";
    out[task] = std::move(m);
  }
  return out;
}

ocr::ModelBindings ResolveModels(const PipelineConfig &cfg) {
  ocr::ModelBindings models = DiscoverModels(cfg.backend.model_dir);
  for (const auto &[task, m] : cfg.explicit_models) models[task] = m;
  return models;
}

backends::EngineConfig MakeEngineConfig(const BackendPolicy &policy) {
  backends::EngineConfig ec;
  ec.fp16 = policy.fp16;
  ec.intra_op_threads = policy.threads;
  ec.device = backends::ParseDevice(policy.device);
  return ec;
}

}  // namespace ocrkit
