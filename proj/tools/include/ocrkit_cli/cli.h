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

#include <iosfwd>
#include <string>
#include <vector>

#include "ocrkit/document.h"
#include "ocrkit/image.h"

namespace ocrkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidArgs = 2;
inline constexpr int kExitMissingInput = 3;
inline constexpr int kExitPipelineFailure = 4;
inline constexpr int kExitClientFailure = 5;

// Runs the command line in-process. Help goes to `out`, usage errors and
// failures to `err`. Environment variables are read from the process.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int RunCli(int argc, char **argv);

// Draws text line outlines over the page.
Image RenderLines(const Image &page, const std::vector<TextLine> &lines);

}  // namespace ocrkit::cli
