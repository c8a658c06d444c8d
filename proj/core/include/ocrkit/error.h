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

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocrkit {

enum class ErrorCode {
  kDegenerateGeometry,
  kDuplicateEngine,
  kNoEngineAvailable,
  kShapeMismatch,
  kEngineFailure,
  kConfigError,
  kStructureMismatch,
  kFormulaInvalid,
  kChartInvalid,
  kEmbedderFailure,
  kClientFailure,
  kKeyMismatch,
  kEmptyBenchmark,
  kIoError,
  kDecodeError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI, HTTP service, MCP server) can map it onto their own surface.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Validation failures that keep the offending backend output around.
class ContentError : public Error {
 public:
  ContentError(ErrorCode code, const std::string &message, std::string raw)
      : Error(code, message), raw_(std::move(raw)) {}

  const std::string &raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

}  // namespace ocrkit
