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

#include "ocrkit_cli/cli.h"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocrkit/compose.h"
#include "ocrkit/config.h"
#include "ocrkit/error.h"
#include "ocrkit/eval.h"
#include "ocrkit/input.h"
#include "ocrkit/kie.h"
#include "ocrkit/mcp.h"
#include "ocrkit/processor.h"
#include "ocrkit/serve.h"
#include "ocrkit/text.h"

namespace ocrkit::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kBoolTokens = {"True", "False", "true", "false"};

std::string EnvName(const std::string &flag) {
  std::string name = "OCRKIT_";
  for (char c : flag) {
    if (c == '-') continue;
    name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

// Options that override PipelineConfig fields when given on the command
// line or through their OCRKIT_ environment variable.
class Overrides {
 public:
  using Apply = std::function<void(PipelineConfig &)>;

  template <class T>
  CLI::Option *Add(CLI::App *app, const std::string &flag, const std::string &desc,
                   std::function<void(PipelineConfig &, const T &)> fn) {
    auto value = std::make_shared<T>();
    CLI::Option *opt = app->add_option("--" + flag, *value, desc)->envname(EnvName(flag));
    entries_.push_back({opt, [value, fn](PipelineConfig &c) { fn(c, *value); }});
    return opt;
  }

  CLI::Option *AddBool(CLI::App *app, const std::string &flag, const std::string &desc,
                       std::function<void(PipelineConfig &, bool)> fn) {
    auto value = std::make_shared<std::string>();
    CLI::Option *opt = app->add_option("--" + flag, *value, desc)
                           ->envname(EnvName(flag))
                           ->check(CLI::IsMember(kBoolTokens))
                           ->type_name("BOOL");
    entries_.push_back({opt, [value, fn](PipelineConfig &c) { fn(c, *ParseBool(*value)); }});
    return opt;
  }

  void ApplyTo(PipelineConfig &cfg) const {
    for (const auto &[opt, apply] : entries_) {
      if (!opt->empty()) apply(cfg);
    }
  }

 private:
  std::vector<std::pair<CLI::Option *, Apply>> entries_;
};

struct CommonArgs {
  std::string input;
  std::string output = "output";
  std::string config;
  bool show_trace = false;
};

void AddInputArgs(CLI::App *sub, CommonArgs &a) {
  sub->add_option("-i,--input", a.input, "Input image or PDF file")
      ->required()
      ->envname("OCRKIT_INPUT");
  sub->add_option("-o,--output", a.output, "Directory for result files")
      ->envname("OCRKIT_OUTPUT")
      ->capture_default_str();
  sub->add_option("-c,--config", a.config, "YAML pipeline configuration file")
      ->envname("OCRKIT_CONFIG");
}

void AddBackendArgs(CLI::App *sub, Overrides &o) {
  o.Add<std::string>(sub, "model_dir", "Model directory (stub fixtures live here too)",
                     [](PipelineConfig &c, const std::string &v) { c.backend.model_dir = v; });
  o.Add<std::string>(sub, "device", "cpu, gpu or gpu:N",
                     [](PipelineConfig &c, const std::string &v) { c.backend.device = v; });
  o.AddBool(sub, "enable_fp16", "Run models in half precision where supported",
            [](PipelineConfig &c, bool v) { c.backend.fp16 = v; });
  o.Add<int>(sub, "cpu_threads", "Intra-op threads per engine",
             [](PipelineConfig &c, const int &v) { c.backend.threads = v; })
      ->check(CLI::PositiveNumber);
  o.Add<std::string>(sub, "pdf_rasterizer", "PDF rasterizer command template",
                     [](PipelineConfig &c, const std::string &v) { c.pdf.command = v; });
  o.Add<int>(sub, "pdf_dpi", "PDF rasterization resolution",
             [](PipelineConfig &c, const int &v) { c.pdf.dpi = v; })
      ->check(CLI::PositiveNumber);
}

void AddOcrArgs(CLI::App *sub, Overrides &o) {
  o.AddBool(sub, "use_doc_orientation_classify", "Correct page rotation first",
            [](PipelineConfig &c, bool v) { c.structure.ocr.use_doc_orientation_classify = v; });
  o.AddBool(sub, "use_doc_unwarping", "Flatten curved pages first",
            [](PipelineConfig &c, bool v) { c.structure.ocr.use_doc_unwarping = v; });
  o.AddBool(sub, "use_textline_orientation", "Fix upside-down text lines",
            [](PipelineConfig &c, bool v) { c.structure.ocr.use_textline_orientation = v; });
  o.Add<double>(sub, "text_det_thresh", "Pixel threshold of the text probability map",
                [](PipelineConfig &c, const double &v) { c.structure.ocr.detection.bin_thresh = v; })
      ->check(CLI::Range(0.0, 1.0));
  o.Add<double>(sub, "text_det_box_thresh", "Minimum mean probability of a text box",
                [](PipelineConfig &c, const double &v) {
                  c.structure.ocr.detection.box_score_thresh = v;
                })
      ->check(CLI::Range(0.0, 1.0));
  o.Add<double>(sub, "text_det_unclip_ratio", "Text box expansion ratio",
                [](PipelineConfig &c, const double &v) {
                  c.structure.ocr.detection.unclip_ratio = v;
                })
      ->check(CLI::NonNegativeNumber);
  o.Add<double>(sub, "text_rec_score_thresh", "Drop recognized lines scoring below this",
                [](PipelineConfig &c, const double &v) { c.structure.ocr.rec_score_thresh = v; })
      ->check(CLI::Range(0.0, 1.0));
  o.Add<int>(sub, "parallelism", "Worker threads inside the pipeline",
             [](PipelineConfig &c, const int &v) { c.structure.ocr.parallelism = v; })
      ->check(CLI::PositiveNumber);
}

void AddStructureArgs(CLI::App *sub, Overrides &o) {
  o.AddBool(sub, "use_region_detection", "Group blocks into article regions",
            [](PipelineConfig &c, bool v) { c.structure.use_region_detection = v; });
  o.AddBool(sub, "use_table_recognition", "Recognize table structure",
            [](PipelineConfig &c, bool v) { c.structure.use_table_recognition = v; });
  o.AddBool(sub, "use_formula_recognition", "Recognize formulas as LaTeX",
            [](PipelineConfig &c, bool v) { c.structure.use_formula_recognition = v; });
  o.AddBool(sub, "use_chart_recognition", "Convert charts to tables",
            [](PipelineConfig &c, bool v) { c.structure.use_chart_recognition = v; });
  o.AddBool(sub, "use_seal_recognition", "Read curved seal text",
            [](PipelineConfig &c, bool v) { c.structure.use_seal_recognition = v; });
  o.Add<double>(sub, "layout_threshold", "Minimum layout detection score",
                [](PipelineConfig &c, const double &v) { c.structure.layout.score_thresh = v; })
      ->check(CLI::Range(0.0, 1.0));
  o.Add<double>(sub, "layout_nms_iou", "IoU above which same-category layout boxes merge",
                [](PipelineConfig &c, const double &v) { c.structure.layout.nms_iou = v; })
      ->check(CLI::Range(0.0, 1.0));
  o.Add<std::string>(sub, "order_mode", "Reading order: auto, horizontal or vertical",
                     [](PipelineConfig &c, const std::string &v) { c.structure.order_mode = v; })
      ->check(CLI::IsMember({"auto", "horizontal", "vertical"}));
  o.AddBool(sub, "include_header_footer", "Keep page headers and footers in Markdown",
            [](PipelineConfig &c, bool v) { c.include_header_footer = v; });
}

void AddClientArgs(CLI::App *sub, Overrides &o, const std::string &slot,
                   kie::ClientConfig KieSettings::*member) {
  const auto field = [member](PipelineConfig &c) -> kie::ClientConfig & { return c.kie.*member; };
  o.Add<std::string>(sub, slot + "_api_type", "mock or openai",
                     [field](PipelineConfig &c, const std::string &v) { field(c).api_type = v; })
      ->check(CLI::IsMember({"mock", "openai"}));
  o.Add<std::string>(sub, slot + "_base_url", "Endpoint base URL",
                     [field](PipelineConfig &c, const std::string &v) { field(c).base_url = v; });
  o.Add<std::string>(sub, slot + "_model_name", "Model name sent to the endpoint",
                     [field](PipelineConfig &c, const std::string &v) { field(c).model_name = v; });
  o.Add<std::string>(sub, slot + "_api_key", "API key",
                     [field](PipelineConfig &c, const std::string &v) { field(c).api_key = v; });
}

class ExitError : public std::runtime_error {
 public:
  ExitError(int code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

PipelineConfig BuildConfig(const CommonArgs &a, const Overrides &o) {
  PipelineConfig cfg;
  if (!a.config.empty()) {
    try {
      cfg = load_config(a.config);
    } catch (const Error &e) {
      throw ExitError(kExitInvalidArgs, e.what());
    }
  }
  o.ApplyTo(cfg);
  return cfg;
}

void RequireInput(const std::string &input) {
  std::error_code ec;
  if (!fs::is_regular_file(input, ec)) throw ExitError(kExitMissingInput, "input not found: " + input);
}

std::vector<Image> LoadInput(const std::string &input, const PipelineConfig &cfg) {
  RequireInput(input);
  return LoadPages(input, cfg.pdf);
}

void PrintTrace(std::ostream &err, const ProcessOutput &res) {
  for (size_t p = 0; p < res.traces.size(); ++p) {
    std::string joined;
    for (const std::string &s : res.traces[p]) joined += (joined.empty() ? "" : ",") + s;
    err << "[trace] page " << p << ": " << joined << "\n";
  }
}

void WriteImageCrops(const Page &page, const fs::path &dir) {
  for (const DocumentItem &it : page.items) {
    if (const auto *img = std::get_if<ImageContent>(&it.content); img && img->crop) {
      WritePng(*img->crop, dir / img->path);
    }
  }
}

int CmdOcr(const CommonArgs &a, const Overrides &o, bool save_vis, std::ostream &out,
           std::ostream &err) {
  const PipelineConfig cfg = BuildConfig(a, o);
  const std::vector<Image> pages = LoadInput(a.input, cfg);
  DocumentProcessor proc(cfg, PipelineKind::kOcr, MakeRegistry(cfg.backend));
  const ProcessOutput res = proc.Process(pages, PipelineKind::kOcr);
  const fs::path dir = a.output;
  fs::create_directories(dir);
  const std::string stem = fs::path(a.input).stem().string();
  WriteTextFile(dir / (stem + "_res.json"), compose::emit_json(res.document));
  if (save_vis) {
    for (size_t p = 0; p < pages.size(); ++p) {
      WritePng(RenderLines(pages[p], res.document.pages[p].text_lines),
               dir / (stem + "_page" + std::to_string(p) + "_vis.png"));
    }
  }
  for (const Page &p : res.document.pages) {
    for (const TextLine &l : p.text_lines) out << l.text << "\n";
  }
  if (a.show_trace) PrintTrace(err, res);
  for (const std::string &w : res.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

int CmdStructure(const CommonArgs &a, const Overrides &o, std::ostream &out, std::ostream &err) {
  const PipelineConfig cfg = BuildConfig(a, o);
  const std::vector<Image> pages = LoadInput(a.input, cfg);
  DocumentProcessor proc(cfg, PipelineKind::kStructure, MakeRegistry(cfg.backend));
  const ProcessOutput res = proc.Process(pages, PipelineKind::kStructure);
  const fs::path dir = a.output;
  fs::create_directories(dir);
  const std::string stem = fs::path(a.input).stem().string();
  const compose::MarkdownOptions md{cfg.include_header_footer};
  for (const Page &p : res.document.pages) {
    Document single;
    single.pages.push_back(p);
    const std::string base = stem + "_page" + std::to_string(p.index);
    WriteTextFile(dir / (base + "_res.json"), compose::emit_json(single));
    WriteTextFile(dir / (base + ".md"), compose::PageMarkdown(p, md));
    WriteImageCrops(p, dir);
  }
  WriteTextFile(dir / (stem + "_res.json"), compose::emit_json(res.document));
  WriteTextFile(dir / (stem + ".md"), res.markdown);
  out << res.markdown;
  if (a.show_trace) PrintTrace(err, res);
  for (const std::string &w : res.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

int CmdKie(const CommonArgs &a, const Overrides &o, const std::vector<std::string> &raw_keys,
           std::ostream &out, std::ostream &err) {
  std::vector<std::string> keys;
  for (const std::string &k : raw_keys) {
    size_t start = 0;
    while (start <= k.size()) {
      size_t comma = k.find(',', start);
      if (comma == std::string::npos) comma = k.size();
      const std::string key = text::Trim(std::string_view(k).substr(start, comma - start));
      if (!key.empty()) keys.push_back(key);
      start = comma + 1;
    }
  }
  if (keys.empty()) throw ExitError(kExitInvalidArgs, "at least one key is required (-k)");
  const PipelineConfig cfg = BuildConfig(a, o);
  RequireInput(a.input);

  kie::KieClients clients;
  try {
    clients.llm = kie::MakeLlmClient(cfg.kie.chat);
    clients.embedder = kie::MakeEmbedder(cfg.kie.retriever);
    if (cfg.kie.use_mllm) clients.mllm = kie::MakeMllmClient(cfg.kie.mllm);
  } catch (const Error &e) {
    throw ExitError(e.code() == ErrorCode::kConfigError ? kExitInvalidArgs : kExitClientFailure,
                    e.what());
  }

  const std::vector<Image> pages = LoadPages(a.input, cfg.pdf);
  DocumentProcessor proc(cfg, PipelineKind::kStructure, MakeRegistry(cfg.backend));
  const ProcessOutput res = proc.Process(pages, PipelineKind::kStructure);

  kie::KieOptions opts;
  opts.max_chars = cfg.kie.max_chars;
  opts.overlap = cfg.kie.overlap;
  opts.top_k = cfg.kie.top_k;
  opts.parallelism = cfg.structure.ocr.parallelism;
  kie::KieResult result;
  try {
    result = kie::extract(res.document, pages, keys, clients, cfg.kie.use_mllm, opts);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kClientFailure || e.code() == ErrorCode::kEmbedderFailure) {
      throw ExitError(kExitClientFailure, e.what());
    }
    throw;
  }

  compose::Json answers = compose::Json::array();
  for (const kie::KieAnswer &ans : result.answers) {
    compose::Json j = {{"key", ans.key},
                       {"value", ans.value},
                       {"source", std::string(kie::AnswerSourceName(ans.source))}};
    if (ans.alternate) j["alternate"] = *ans.alternate;
    answers.push_back(std::move(j));
    out << ans.key << ": " << ans.value << "\n";
  }
  const fs::path dir = a.output;
  fs::create_directories(dir);
  const std::string stem = fs::path(a.input).stem().string();
  WriteTextFile(dir / (stem + "_kie.json"),
                compose::CanonicalDump({{"version", compose::kSchemaVersion}, {"answers", answers}}));
  for (const std::string &w : result.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Document parsing: OCR, layout structure and key information extraction",
               "ocrkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ocrkit 0.1.0");

  // ocr
  CommonArgs ocr_args;
  Overrides ocr_o;
  bool save_vis = false;
  CLI::App *ocr = app.add_subcommand("ocr", "Detect and recognize text lines");
  AddInputArgs(ocr, ocr_args);
  AddOcrArgs(ocr, ocr_o);
  AddBackendArgs(ocr, ocr_o);
  std::string save_vis_str;
  ocr->add_option("--save_visualization", save_vis_str, "Also write an image with line outlines")
      ->envname("OCRKIT_SAVE_VISUALIZATION")
      ->check(CLI::IsMember(kBoolTokens))
      ->type_name("BOOL");
  std::string ocr_trace;
  ocr->add_option("--show_trace", ocr_trace, "Print the stages that ran to stderr")
      ->envname("OCRKIT_SHOW_TRACE")
      ->check(CLI::IsMember(kBoolTokens))
      ->type_name("BOOL");

  // structure
  CommonArgs st_args;
  Overrides st_o;
  CLI::App *st = app.add_subcommand("structure", "Convert a document to Markdown and JSON");
  st->alias("pp_structurev3");
  AddInputArgs(st, st_args);
  AddOcrArgs(st, st_o);
  AddStructureArgs(st, st_o);
  AddBackendArgs(st, st_o);
  std::string st_trace;
  st->add_option("--show_trace", st_trace, "Print the stages that ran to stderr")
      ->envname("OCRKIT_SHOW_TRACE")
      ->check(CLI::IsMember(kBoolTokens))
      ->type_name("BOOL");

  // kie
  CommonArgs kie_args;
  Overrides kie_o;
  std::vector<std::string> keys;
  CLI::App *kie_cmd = app.add_subcommand("kie", "Extract key information with a language model");
  kie_cmd->alias("pp_chatocrv4_doc");
  AddInputArgs(kie_cmd, kie_args);
  kie_cmd->add_option("-k,--keys", keys, "Keys to extract (repeatable or comma separated)")
      ->envname("OCRKIT_KEYS")
      ->delimiter(',');
  kie_o.AddBool(kie_cmd, "use_mllm", "Also ask the multimodal model",
                [](PipelineConfig &c, bool v) { c.kie.use_mllm = v; });
  kie_o.Add<int>(kie_cmd, "top_k", "Retrieved chunks per query",
                 [](PipelineConfig &c, const int &v) { c.kie.top_k = v; })
      ->check(CLI::PositiveNumber);
  AddClientArgs(kie_cmd, kie_o, "chat", &KieSettings::chat);
  AddClientArgs(kie_cmd, kie_o, "mllm", &KieSettings::mllm);
  AddClientArgs(kie_cmd, kie_o, "retriever", &KieSettings::retriever);
  AddStructureArgs(kie_cmd, kie_o);
  AddBackendArgs(kie_cmd, kie_o);

  // eval
  std::string bench;
  std::string report_out;
  std::string collapse = "False";
  CLI::App *ev = app.add_subcommand("eval", "Score predictions with 1 - normalized edit distance");
  ev->add_option("-b,--benchmark", bench, "Benchmark file (JSON Lines)")
      ->required()
      ->envname("OCRKIT_BENCHMARK");
  ev->add_option("-o,--output", report_out, "Write the JSON report here")
      ->envname("OCRKIT_OUTPUT");
  ev->add_option("--collapse_whitespace", collapse, "Collapse whitespace before scoring")
      ->envname("OCRKIT_COLLAPSE_WHITESPACE")
      ->check(CLI::IsMember(kBoolTokens))
      ->type_name("BOOL")
      ->capture_default_str();

  // serve
  std::string serve_config;
  std::string serve_pipeline = "ocr";
  Overrides serve_o;
  CLI::App *srv = app.add_subcommand("serve", "Run a pipeline as an HTTP service");
  srv->add_option("-c,--config", serve_config, "YAML pipeline configuration file")
      ->envname("OCRKIT_CONFIG");
  srv->add_option("--pipeline", serve_pipeline, "ocr or structure")
      ->envname("OCRKIT_PIPELINE")
      ->transform(CLI::IsMember({"ocr", "structure"}, CLI::ignore_case))
      ->capture_default_str();
  serve_o.Add<std::string>(srv, "host", "Bind address",
                           [](PipelineConfig &c, const std::string &v) { c.serving.host = v; });
  serve_o.Add<int>(srv, "port", "Port (0 picks a free one)",
                   [](PipelineConfig &c, const int &v) { c.serving.port = v; })
      ->check(CLI::Range(0, 65535));
  serve_o.Add<int>(srv, "instances", "Pipeline instances serving requests",
                   [](PipelineConfig &c, const int &v) { c.serving.parallelism = v; })
      ->check(CLI::PositiveNumber);
  serve_o.Add<int>(srv, "queue_limit", "Requests allowed to wait before 503",
                   [](PipelineConfig &c, const int &v) { c.serving.queue_limit = v; })
      ->check(CLI::NonNegativeNumber);
  serve_o.Add<size_t>(srv, "max_body_bytes", "Largest accepted request body",
                      [](PipelineConfig &c, const size_t &v) { c.serving.max_body_bytes = v; })
      ->check(CLI::PositiveNumber);
  serve_o.Add<int>(srv, "timeout", "Request timeout in seconds",
                   [](PipelineConfig &c, const int &v) { c.serving.timeout_seconds = v; })
      ->check(CLI::PositiveNumber);
  AddBackendArgs(srv, serve_o);

  // mcp
  std::string mcp_config;
  std::string mcp_pipeline = "ocr";
  std::string mcp_source = "local";
  std::string mcp_url;
  std::string mcp_token;
  std::string mcp_transport = "stdio";
  std::string mcp_host = "127.0.0.1";
  int mcp_port = 8090;
  int mcp_timeout = 60;
  Overrides mcp_o;
  CLI::App *mcp_cmd = app.add_subcommand("mcp", "Expose the pipelines as MCP tools");
  mcp_cmd->add_option("-c,--config", mcp_config, "YAML pipeline configuration file")
      ->envname("OCRKIT_CONFIG");
  mcp_cmd->add_option("--pipeline", mcp_pipeline, "Pipeline to preload: ocr or structure")
      ->envname(mcp::kEnvPipeline)
      ->transform(CLI::IsMember({"ocr", "structure"}, CLI::ignore_case))
      ->capture_default_str();
  mcp_cmd->add_option("--source", mcp_source, "local, self_hosted or hosted_cloud")
      ->envname(mcp::kEnvSource)
      ->transform(CLI::IsMember({"local", "self_hosted", "hosted_cloud"}, CLI::ignore_case))
      ->capture_default_str();
  mcp_cmd->add_option("--server_url", mcp_url, "Service URL for the remote modes")
      ->envname(mcp::kEnvServerUrl);
  mcp_cmd->add_option("--access_token", mcp_token, "Bearer token for hosted_cloud")
      ->envname(mcp::kEnvAccessToken);
  mcp_cmd->add_option("--transport", mcp_transport, "stdio or streamable-http")
      ->envname("OCRKIT_MCP_TRANSPORT")
      ->check(CLI::IsMember({"stdio", "streamable-http"}))
      ->capture_default_str();
  mcp_cmd->add_option("--http_host", mcp_host, "Listen address for streamable-http")
      ->envname("OCRKIT_MCP_HOST")
      ->capture_default_str();
  mcp_cmd->add_option("--http_port", mcp_port, "Listen port for streamable-http")
      ->envname("OCRKIT_MCP_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  mcp_cmd->add_option("--timeout", mcp_timeout, "Tool call timeout in seconds")
      ->envname("OCRKIT_MCP_TIMEOUT")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  AddBackendArgs(mcp_cmd, mcp_o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      // --help / --version
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, err, err);
    return kExitInvalidArgs;
  }

  try {
    if (ocr->parsed()) {
      ocr_args.show_trace = ocr_trace.empty() ? false : *ParseBool(ocr_trace);
      save_vis = save_vis_str.empty() ? false : *ParseBool(save_vis_str);
      return CmdOcr(ocr_args, ocr_o, save_vis, out, err);
    }
    if (st->parsed()) {
      st_args.show_trace = st_trace.empty() ? false : *ParseBool(st_trace);
      return CmdStructure(st_args, st_o, out, err);
    }
    if (kie_cmd->parsed()) return CmdKie(kie_args, kie_o, keys, out, err);
    if (ev->parsed()) {
      if (!fs::is_regular_file(bench)) throw ExitError(kExitMissingInput, "benchmark not found: " + bench);
      std::vector<eval::EvalCase> cases;
      try {
        cases = eval::LoadBenchmark(bench);
      } catch (const Error &e) {
        throw ExitError(e.code() == ErrorCode::kIoError ? kExitMissingInput : kExitInvalidArgs,
                        e.what());
      }
      const eval::EvalReport report = eval::run_benchmark(cases, {*ParseBool(collapse)});
      out << eval::ReportTable(report);
      if (!report_out.empty()) WriteTextFile(report_out, eval::ReportJson(report));
      return kExitOk;
    }
    if (srv->parsed()) {
      CommonArgs a;
      a.config = serve_config;
      const PipelineConfig cfg = BuildConfig(a, serve_o);
      const PipelineKind kind = *ParsePipelineKind(serve_pipeline);
      serve::ServiceConfig sc = serve::MakeServiceConfig(cfg.serving, kind);
      auto pool = std::shared_ptr<serve::InstancePool>(
          serve::MakePool(cfg, kind, sc.parallelism, sc.queue_limit));
      serve::HttpService service(sc, pool, cfg.pdf);
      err << "serving " << PipelineKindName(kind) << " on " << sc.host << ":" << sc.port << "\n";
      service.Run();
      return kExitOk;
    }
    if (mcp_cmd->parsed()) {
      CommonArgs a;
      a.config = mcp_config;
      const PipelineConfig cfg = BuildConfig(a, mcp_o);
      mcp::McpConfig mc;
      mc.pipeline = *ParsePipelineKind(mcp_pipeline);
      mc.source = *mcp::ParseSource(mcp_source);
      if (!mcp_url.empty()) mc.server_url = mcp_url;
      if (!mcp_token.empty()) mc.access_token = mcp_token;
      mc.transport = *mcp::ParseTransport(mcp_transport);
      mc.device = cfg.backend.device;
      mc.timeout_seconds = mcp_timeout;
      mc.host = mcp_host;
      mc.port = mcp_port;
      mc.parallelism = cfg.serving.parallelism;
      try {
        mcp::ValidateMcpConfig(mc);
      } catch (const Error &e) {
        throw ExitError(kExitInvalidArgs, e.what());
      }
      mcp::McpServer server(mc, mcp::MakeBackend(mc, cfg));
      if (mc.transport == mcp::Transport::kStdio) {
        server.ServeStdio(std::cin, std::cout);
        return kExitOk;
      }
      serve::ServiceConfig sc = serve::MakeServiceConfig(cfg.serving, mc.pipeline);
      sc.host = mc.host;
      sc.port = mc.port;
      serve::HttpService http(sc, serve::MakePool(cfg, mc.pipeline, 1, 0), cfg.pdf);
      server.Attach(http.server());
      err << "MCP streamable-http on " << sc.host << ":" << sc.port << "/mcp\n";
      http.Run();
      return kExitOk;
    }
  } catch (const ExitError &e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitPipelineFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitPipelineFailure;
  }
  return kExitInvalidArgs;
}

int RunCli(int argc, char **argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace ocrkit::cli
