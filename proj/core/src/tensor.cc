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

#include "ocrkit/tensor.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ocrkit/error.h"

static_assert(std::endian::native == std::endian::little,
              "tensor serialization assumes a little-endian host");

namespace ocrkit {
namespace {

constexpr char kMagic[4] = {'O', 'K', 'T', '1'};
constexpr size_t kHeaderSize = 16;

template <class T>
std::vector<std::byte> ToBytes(std::span<const T> values) {
  std::vector<std::byte> out(values.size_bytes());
  if (!out.empty()) std::memcpy(out.data(), values.data(), out.size());
  return out;
}

template <class T>
std::span<const T> View(const std::vector<std::byte> &data) {
  return {reinterpret_cast<const T *>(data.data()), data.size() / sizeof(T)};
}

void PutU32(std::vector<std::byte> &out, uint32_t v) {
  const auto *p = reinterpret_cast<const std::byte *>(&v);
  out.insert(out.end(), p, p + 4);
}

}  // namespace

std::string_view DTypeName(DType t) {
  switch (t) {
    case DType::kF32: return "f32";
    case DType::kF16: return "f16";
    case DType::kI64: return "i64";
    case DType::kU8: return "u8";
  }
  return "?";
}

size_t DTypeSize(DType t) {
  switch (t) {
    case DType::kF32: return 4;
    case DType::kF16: return 2;
    case DType::kI64: return 8;
    case DType::kU8: return 1;
  }
  return 0;
}

uint16_t FloatToHalf(float f) {
  const auto bits = std::bit_cast<uint32_t>(f);
  const uint32_t sign = (bits >> 16) & 0x8000u;
  const int32_t exp = static_cast<int32_t>((bits >> 23) & 0xFF) - 127 + 15;
  uint32_t mant = bits & 0x7FFFFFu;
  if (((bits >> 23) & 0xFF) == 0xFF) {
    return static_cast<uint16_t>(sign | 0x7C00u | (mant ? 0x200u : 0u));
  }
  if (exp >= 31) return static_cast<uint16_t>(sign | 0x7C00u);
  if (exp <= 0) {
    if (exp < -10) return static_cast<uint16_t>(sign);
    mant |= 0x800000u;
    const uint32_t shift = static_cast<uint32_t>(14 - exp);
    uint32_t half = mant >> shift;
    const uint32_t rem = mant & ((1u << shift) - 1);
    const uint32_t mid = 1u << (shift - 1);
    if (rem > mid || (rem == mid && (half & 1u))) ++half;
    return static_cast<uint16_t>(sign | half);
  }
  uint32_t half = sign | (static_cast<uint32_t>(exp) << 10) | (mant >> 13);
  const uint32_t rem = mant & 0x1FFFu;
  if (rem > 0x1000u || (rem == 0x1000u && (half & 1u))) ++half;
  return static_cast<uint16_t>(half);
}

float HalfToFloat(uint16_t h) {
  const uint32_t sign = (h & 0x8000u) << 16;
  const uint32_t exp = (h >> 10) & 0x1F;
  uint32_t mant = h & 0x3FFu;
  uint32_t bits = 0;
  if (exp == 0) {
    if (mant == 0) {
      bits = sign;
    } else {
      int e = -1;
      do {
        ++e;
        mant <<= 1;
      } while ((mant & 0x400u) == 0);
      bits = sign | (static_cast<uint32_t>(127 - 15 - e) << 23) | ((mant & 0x3FFu) << 13);
    }
  } else if (exp == 0x1F) {
    bits = sign | 0x7F800000u | (mant << 13);
  } else {
    bits = sign | ((exp - 15 + 127) << 23) | (mant << 13);
  }
  return std::bit_cast<float>(bits);
}

Tensor::Tensor(DType dtype, std::vector<int64_t> shape)
    : dtype_(dtype), shape_(std::move(shape)) {
  data_.resize(element_count() * DTypeSize(dtype_));
}

Tensor::Tensor(DType dtype, std::vector<int64_t> shape, std::vector<std::byte> data)
    : dtype_(dtype), shape_(std::move(shape)), data_(std::move(data)) {
  for (int64_t d : shape_) {
    if (d < 0) Fail(ErrorCode::kShapeMismatch, "tensor dimensions must be non-negative");
  }
  if (data_.size() != element_count() * DTypeSize(dtype_)) {
    Fail(ErrorCode::kShapeMismatch, "tensor buffer size does not match its shape");
  }
}

Tensor Tensor::F32(std::vector<int64_t> shape, std::span<const float> values) {
  return Tensor(DType::kF32, std::move(shape), ToBytes(values));
}

Tensor Tensor::I64(std::vector<int64_t> shape, std::span<const int64_t> values) {
  return Tensor(DType::kI64, std::move(shape), ToBytes(values));
}

Tensor Tensor::U8(std::vector<int64_t> shape, std::span<const uint8_t> values) {
  return Tensor(DType::kU8, std::move(shape), ToBytes(values));
}

Tensor Tensor::Text(std::string_view s) {
  return U8({static_cast<int64_t>(s.size())},
            std::span(reinterpret_cast<const uint8_t *>(s.data()), s.size()));
}

size_t Tensor::element_count() const {
  size_t n = 1;
  for (int64_t d : shape_) n *= static_cast<size_t>(d);
  return n;
}

std::span<const float> Tensor::f32() const {
  if (dtype_ != DType::kF32) Fail(ErrorCode::kShapeMismatch, "tensor is not f32");
  return View<float>(data_);
}

std::span<const int64_t> Tensor::i64() const {
  if (dtype_ != DType::kI64) Fail(ErrorCode::kShapeMismatch, "tensor is not i64");
  return View<int64_t>(data_);
}

std::span<const uint8_t> Tensor::u8() const {
  if (dtype_ != DType::kU8) Fail(ErrorCode::kShapeMismatch, "tensor is not u8");
  return View<uint8_t>(data_);
}

std::vector<float> Tensor::ToFloat() const {
  std::vector<float> out;
  out.reserve(element_count());
  switch (dtype_) {
    case DType::kF32: {
      auto v = f32();
      out.assign(v.begin(), v.end());
      break;
    }
    case DType::kF16:
      for (uint16_t h : View<uint16_t>(data_)) out.push_back(HalfToFloat(h));
      break;
    case DType::kI64:
      for (int64_t v : i64()) out.push_back(static_cast<float>(v));
      break;
    case DType::kU8:
      for (uint8_t v : u8()) out.push_back(static_cast<float>(v));
      break;
  }
  return out;
}

std::string Tensor::AsText() const {
  auto v = u8();
  return {reinterpret_cast<const char *>(v.data()), v.size()};
}

std::vector<std::byte> SerializeTensor(const Tensor &t) {
  std::vector<std::byte> out;
  out.reserve(kHeaderSize + 8 * t.rank() + t.bytes().size());
  const auto *m = reinterpret_cast<const std::byte *>(kMagic);
  out.insert(out.end(), m, m + 4);
  PutU32(out, static_cast<uint32_t>(t.dtype()));
  PutU32(out, static_cast<uint32_t>(t.rank()));
  PutU32(out, 0);
  for (int64_t d : t.shape()) {
    const auto *p = reinterpret_cast<const std::byte *>(&d);
    out.insert(out.end(), p, p + 8);
  }
  out.insert(out.end(), t.bytes().begin(), t.bytes().end());
  return out;
}

Tensor DeserializeTensor(std::span<const std::byte> buf) {
  if (buf.size() < kHeaderSize || std::memcmp(buf.data(), kMagic, 4) != 0) {
    Fail(ErrorCode::kDecodeError, "not a tensor file (bad magic)");
  }
  uint32_t dtype = 0;
  uint32_t rank = 0;
  std::memcpy(&dtype, buf.data() + 4, 4);
  std::memcpy(&rank, buf.data() + 8, 4);
  if (dtype > static_cast<uint32_t>(DType::kU8)) {
    Fail(ErrorCode::kDecodeError, "tensor file has unknown dtype " + std::to_string(dtype));
  }
  if (buf.size() < kHeaderSize + 8ull * rank) {
    Fail(ErrorCode::kDecodeError, "tensor file truncated in shape");
  }
  std::vector<int64_t> shape(rank);
  if (rank > 0) std::memcpy(shape.data(), buf.data() + kHeaderSize, 8ull * rank);
  const auto body = buf.subspan(kHeaderSize + 8ull * rank);
  return Tensor(static_cast<DType>(dtype), std::move(shape),
                std::vector<std::byte>(body.begin(), body.end()));
}

void WriteTensorFile(const Tensor &t, const std::filesystem::path &path) {
  const auto bytes = SerializeTensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Tensor ReadTensorFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<char> raw{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return DeserializeTensor(std::as_bytes(std::span(raw)));
}

}  // namespace ocrkit
