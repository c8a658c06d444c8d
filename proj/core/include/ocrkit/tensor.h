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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocrkit {

enum class DType : uint32_t { kF32 = 0, kF16 = 1, kI64 = 2, kU8 = 3 };

std::string_view DTypeName(DType t);
size_t DTypeSize(DType t);

uint16_t FloatToHalf(float f);
float HalfToFloat(uint16_t h);

// Dense row-major tensor with an untyped little-endian byte buffer.
class Tensor {
 public:
  Tensor() = default;
  Tensor(DType dtype, std::vector<int64_t> shape);
  Tensor(DType dtype, std::vector<int64_t> shape, std::vector<std::byte> data);

  static Tensor F32(std::vector<int64_t> shape, std::span<const float> values);
  static Tensor I64(std::vector<int64_t> shape, std::span<const int64_t> values);
  static Tensor U8(std::vector<int64_t> shape, std::span<const uint8_t> values);
  // UTF-8 text carried as a rank-1 U8 tensor.
  static Tensor Text(std::string_view s);

  DType dtype() const { return dtype_; }
  const std::vector<int64_t> &shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t element_count() const;
  std::span<const std::byte> bytes() const { return data_; }

  // Typed views; throw ShapeMismatch on dtype mismatch.
  std::span<const float> f32() const;
  std::span<const int64_t> i64() const;
  std::span<const uint8_t> u8() const;

  // Converts any numeric dtype to float values.
  std::vector<float> ToFloat() const;
  std::string AsText() const;

  friend bool operator==(const Tensor &, const Tensor &) = default;

 private:
  DType dtype_ = DType::kF32;
  std::vector<int64_t> shape_;
  std::vector<std::byte> data_;
};

using TensorMap = std::map<std::string, Tensor>;

// Binary tensor file: 16-byte header {magic "OKT1", dtype u32, rank u32,
// reserved u32}, then rank int64 dims, then the data; all little-endian.
void WriteTensorFile(const Tensor &t, const std::filesystem::path &path);
Tensor ReadTensorFile(const std::filesystem::path &path);
std::vector<std::byte> SerializeTensor(const Tensor &t);
Tensor DeserializeTensor(std::span<const std::byte> buf);

}  // namespace ocrkit
