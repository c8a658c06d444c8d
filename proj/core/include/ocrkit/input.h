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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ocrkit/image.h"

namespace ocrkit {

struct RasterizerConfig {
  // {dpi}, {input} and {prefix} are substituted; the command must write
  // <prefix>-<page>.png files.
  std::string command = "pdftoppm -r {dpi} -png {input} {prefix}";
  int dpi = 144;
};

bool IsPdf(std::span<const uint8_t> bytes);

// Rasterizes every page of a PDF through the external command.
std::vector<Image> RasterizePdf(const std::filesystem::path &pdf, const RasterizerConfig &cfg);

// One image per page: image files give one page, PDFs one per PDF page.
std::vector<Image> LoadPages(const std::filesystem::path &path, const RasterizerConfig &cfg = {});
std::vector<Image> LoadPagesFromBytes(std::span<const uint8_t> bytes,
                                      const RasterizerConfig &cfg = {});

}  // namespace ocrkit
