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

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. Invalid sequences decode to U+FFFD.

namespace ocrkit::text {

std::u32string DecodeUtf8(std::string_view s);
std::string EncodeUtf8(std::u32string_view s);
// Splits into scalar-value substrings (one UTF-8 encoded code point each).
std::vector<std::string> SplitCodePoints(std::string_view s);
size_t CodePointCount(std::string_view s);

bool IsSpace(char32_t c);
std::string Trim(std::string_view s);
std::string AsciiLower(std::string_view s);
std::string CollapseWhitespace(std::string_view s);
// Trim + ASCII case fold + whitespace collapse.
std::string NormalizeForMatch(std::string_view s);

std::string EscapeHtml(std::string_view s);
std::string UnescapeHtml(std::string_view s);

}  // namespace ocrkit::text
