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

#include "ocrkit/input.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>

#include "ocrkit/error.h"

namespace ocrkit {
namespace {

namespace fs = std::filesystem;

std::string ShellQuote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void ReplaceAll(std::string &s, const std::string &from, const std::string &to) {
  for (size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("ocrkit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

// Page number from "<prefix>-<n>.png", for numeric rather than lexical order.
long PageNumber(const fs::path &p) {
  const std::string stem = p.stem().string();
  const size_t dash = stem.rfind('-');
  if (dash == std::string::npos) return 0;
  return std::strtol(stem.c_str() + dash + 1, nullptr, 10);
}

}  // namespace

bool IsPdf(std::span<const uint8_t> bytes) {
  static constexpr uint8_t kMagic[] = {'%', 'P', 'D', 'F', '-'};
  return bytes.size() >= sizeof(kMagic) && std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin());
}

std::vector<Image> RasterizePdf(const fs::path &pdf, const RasterizerConfig &cfg) {
  TempDir dir;
  const fs::path prefix = dir.path() / "page";
  std::string cmd = cfg.command;
  ReplaceAll(cmd, "{dpi}", std::to_string(cfg.dpi));
  ReplaceAll(cmd, "{input}", ShellQuote(pdf.string()));
  ReplaceAll(cmd, "{prefix}", ShellQuote(prefix.string()));
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status != 0) {
    Fail(ErrorCode::kIoError, "PDF rasterizer failed (is it installed?): " + cfg.command);
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir.path())) {
    if (entry.path().extension() == ".png") files.push_back(entry.path());
  }
  if (files.empty()) Fail(ErrorCode::kIoError, "PDF rasterizer produced no pages");
  std::sort(files.begin(), files.end(), [](const fs::path &a, const fs::path &b) {
    return PageNumber(a) < PageNumber(b);
  });
  std::vector<Image> pages;
  for (const fs::path &f : files) pages.push_back(ReadImageFile(f));
  return pages;
}

std::vector<Image> LoadPages(const fs::path &path, const RasterizerConfig &cfg) {
  const std::vector<uint8_t> bytes = ReadBinaryFile(path);
  if (IsPdf(bytes)) return RasterizePdf(path, cfg);
  return {DecodeImage(bytes)};
}

std::vector<Image> LoadPagesFromBytes(std::span<const uint8_t> bytes, const RasterizerConfig &cfg) {
  if (!IsPdf(bytes)) return {DecodeImage(bytes)};
  TempDir dir;
  const fs::path pdf = dir.path() / "input.pdf";
  {
    std::ofstream out(pdf, std::ios::binary);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) Fail(ErrorCode::kIoError, "cannot write temporary PDF");
  }
  return RasterizePdf(pdf, cfg);
}

}  // namespace ocrkit
