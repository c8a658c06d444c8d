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

#include "ocrkit/geometry.h"

namespace ocrkit {

// 8-bit interleaved RGB raster, row-major.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  Image(int width, int height, uint8_t fill = 255);
  Image(int width, int height, std::vector<uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  std::span<const uint8_t> pixels() const { return pixels_; }
  std::span<uint8_t> pixels() { return pixels_; }

  uint8_t at(int x, int y, int c) const {
    return pixels_[(static_cast<size_t>(y) * width_ + x) * kChannels + c];
  }
  uint8_t &at(int x, int y, int c) {
    return pixels_[(static_cast<size_t>(y) * width_ + x) * kChannels + c];
  }
  void Fill(const BBox &box, uint8_t r, uint8_t g, uint8_t b);

  friend bool operator==(const Image &, const Image &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> pixels_;
};

// Clockwise quarter turns.
enum class Rotation { k0 = 0, k90 = 90, k180 = 180, k270 = 270 };

Rotation RotationFromDegrees(int degrees);
Rotation Inverse(Rotation r);
Image Rotate(const Image &img, Rotation r);
// Where point `p` of a `w`x`h` image lands after rotating the image by `r`.
Point RotatePoint(Point p, Rotation r, double w, double h);

// Bilinear sample at continuous coordinates (pixel centres sit at +0.5),
// border replicated. Writes kChannels bytes.
void SampleBilinear(const Image &src, double x, double y, uint8_t *out);

// Samples `out_w`x`out_h` pixels; dst_to_src maps output pixel centres into
// the source.
Image Warp(const Image &src, const Homography &dst_to_src, int out_w, int out_h);
Image CropBox(const Image &src, int x0, int y0, int x1, int y1);

Image DecodeImage(std::span<const uint8_t> bytes);
std::vector<uint8_t> EncodePng(const Image &img);
Image ReadImageFile(const std::filesystem::path &path);
void WritePng(const Image &img, const std::filesystem::path &path);

std::vector<uint8_t> ReadBinaryFile(const std::filesystem::path &path);
std::string ReadTextFile(const std::filesystem::path &path);
void WriteTextFile(const std::filesystem::path &path, std::string_view content);

}  // namespace ocrkit
