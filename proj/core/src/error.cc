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

#include "ocrkit/error.h"

namespace ocrkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kDuplicateEngine: return "DuplicateEngine";
    case ErrorCode::kNoEngineAvailable: return "NoEngineAvailable";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEngineFailure: return "EngineFailure";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kStructureMismatch: return "StructureMismatch";
    case ErrorCode::kFormulaInvalid: return "FormulaInvalid";
    case ErrorCode::kChartInvalid: return "ChartInvalid";
    case ErrorCode::kEmbedderFailure: return "EmbedderFailure";
    case ErrorCode::kClientFailure: return "ClientFailure";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kEmptyBenchmark: return "EmptyBenchmark";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDecodeError: return "DecodeError";
  }
  return "Unknown";
}

}  // namespace ocrkit
