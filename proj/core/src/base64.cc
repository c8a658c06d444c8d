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

#include "ocrkit/base64.h"

#include <openssl/evp.h>

#include <cctype>

namespace ocrkit {

std::string Base64Encode(std::span<const uint8_t> data) {
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char *>(out.data()), data.data(),
                                static_cast<int>(data.size()));
  out.resize(n);
  return out;
}

std::optional<std::vector<uint8_t>> Base64Decode(std::string_view text) {
  std::string clean;
  clean.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const bool alpha = std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/';
    if (!alpha && c != '=') return std::nullopt;
    clean.push_back(c);
  }
  if (clean.size() % 4 != 0) return std::nullopt;
  // EVP_DecodeBlock accepts '=' anywhere; only trailing padding is valid.
  const size_t first_pad = clean.find('=');
  size_t padding = 0;
  if (first_pad != std::string::npos) {
    padding = clean.size() - first_pad;
    if (padding > 2 || clean.find_first_not_of('=', first_pad) != std::string::npos) {
      return std::nullopt;
    }
  }
  std::vector<uint8_t> out(clean.size() / 4 * 3);
  if (clean.empty()) return out;
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char *>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) return std::nullopt;
  out.resize(static_cast<size_t>(n) - padding);
  return out;
}

}  // namespace ocrkit
