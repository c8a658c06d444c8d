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

#include "ocrkit/image.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <sstream>

#include "ocrkit/error.h"

namespace ocrkit {

Image::Image(int width, int height, uint8_t fill)
    : width_(width),
      height_(height),
      pixels_(static_cast<size_t>(width) * height * kChannels, fill) {
  if (width < 0 || height < 0) {
    Fail(ErrorCode::kDegenerateGeometry, "image dimensions must be non-negative");
  }
}

Image::Image(int width, int height, std::vector<uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 ||
      pixels_.size() != static_cast<size_t>(width) * height * kChannels) {
    Fail(ErrorCode::kShapeMismatch, "pixel buffer does not match image size");
  }
}

void Image::Fill(const BBox &box, uint8_t r, uint8_t g, uint8_t b) {
  const int x0 = std::clamp(static_cast<int>(std::floor(box.x0)), 0, width_);
  const int y0 = std::clamp(static_cast<int>(std::floor(box.y0)), 0, height_);
  const int x1 = std::clamp(static_cast<int>(std::ceil(box.x1)), 0, width_);
  const int y1 = std::clamp(static_cast<int>(std::ceil(box.y1)), 0, height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      at(x, y, 0) = r;
      at(x, y, 1) = g;
      at(x, y, 2) = b;
    }
  }
}

Rotation RotationFromDegrees(int degrees) {
  switch (((degrees % 360) + 360) % 360) {
    case 0: return Rotation::k0;
    case 90: return Rotation::k90;
    case 180: return Rotation::k180;
    case 270: return Rotation::k270;
  }
  Fail(ErrorCode::kConfigError,
       "rotation must be a multiple of 90 degrees, got " + std::to_string(degrees));
}

Rotation Inverse(Rotation r) {
  return RotationFromDegrees(360 - static_cast<int>(r));
}

Point RotatePoint(Point p, Rotation r, double w, double h) {
  switch (r) {
    case Rotation::k0: return p;
    case Rotation::k90: return {h - p.y, p.x};
    case Rotation::k180: return {w - p.x, h - p.y};
    case Rotation::k270: return {p.y, w - p.x};
  }
  return p;
}

Image Rotate(const Image &img, Rotation r) {
  if (r == Rotation::k0) return img;
  const int w = img.width();
  const int h = img.height();
  const bool swap = r == Rotation::k90 || r == Rotation::k270;
  Image out(swap ? h : w, swap ? w : h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int nx = x;
      int ny = y;
      switch (r) {
        case Rotation::k90: nx = h - 1 - y; ny = x; break;
        case Rotation::k180: nx = w - 1 - x; ny = h - 1 - y; break;
        case Rotation::k270: nx = y; ny = w - 1 - x; break;
        case Rotation::k0: break;
      }
      for (int c = 0; c < Image::kChannels; ++c) out.at(nx, ny, c) = img.at(x, y, c);
    }
  }
  return out;
}

void SampleBilinear(const Image &src, double x, double y, uint8_t *out) {
  const int w = src.width();
  const int h = src.height();
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  const int x0 = std::clamp(static_cast<int>(x0f), 0, w - 1);
  const int y0 = std::clamp(static_cast<int>(y0f), 0, h - 1);
  const int x1 = std::clamp(static_cast<int>(x0f) + 1, 0, w - 1);
  const int y1 = std::clamp(static_cast<int>(y0f) + 1, 0, h - 1);
  for (int c = 0; c < Image::kChannels; ++c) {
    const double top = src.at(x0, y0, c) * (1 - ax) + src.at(x1, y0, c) * ax;
    const double bot = src.at(x0, y1, c) * (1 - ax) + src.at(x1, y1, c) * ax;
    const double val = top * (1 - ay) + bot * ay;
    out[c] = static_cast<uint8_t>(std::clamp(std::lround(val), 0L, 255L));
  }
}

Image Warp(const Image &src, const Homography &dst_to_src, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0 || src.empty()) {
    Fail(ErrorCode::kDegenerateGeometry, "warp target or source is empty");
  }
  Image out(out_w, out_h);
  for (int v = 0; v < out_h; ++v) {
    for (int u = 0; u < out_w; ++u) {
      const Point s = dst_to_src.Apply({u + 0.5, v + 0.5});
      SampleBilinear(src, s.x, s.y, &out.at(u, v, 0));
    }
  }
  return out;
}

Image CropBox(const Image &src, int x0, int y0, int x1, int y1) {
  x0 = std::clamp(x0, 0, src.width());
  x1 = std::clamp(x1, 0, src.width());
  y0 = std::clamp(y0, 0, src.height());
  y1 = std::clamp(y1, 0, src.height());
  if (x1 <= x0 || y1 <= y0) {
    Fail(ErrorCode::kDegenerateGeometry, "crop box is empty after clipping");
  }
  Image out(x1 - x0, y1 - y0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      for (int c = 0; c < Image::kChannels; ++c) out.at(x - x0, y - y0, c) = src.at(x, y, c);
    }
  }
  return out;
}

Image DecodeImage(std::span<const uint8_t> bytes) {
  if (bytes.empty()) Fail(ErrorCode::kDecodeError, "empty image payload");
  const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<uint8_t *>(bytes.data()));
  cv::Mat bgr;
  try {
    bgr = cv::imdecode(buf, cv::IMREAD_COLOR);
  } catch (const cv::Exception &e) {
    Fail(ErrorCode::kDecodeError, std::string("image decode failed: ") + e.what());
  }
  if (bgr.empty()) Fail(ErrorCode::kDecodeError, "payload is not a decodable image");
  Image out(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto *row = bgr.ptr<uint8_t>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      out.at(x, y, 0) = row[3 * x + 2];
      out.at(x, y, 1) = row[3 * x + 1];
      out.at(x, y, 2) = row[3 * x + 0];
    }
  }
  return out;
}

std::vector<uint8_t> EncodePng(const Image &img) {
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto *row = bgr.ptr<uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      row[3 * x + 0] = img.at(x, y, 2);
      row[3 * x + 1] = img.at(x, y, 1);
      row[3 * x + 2] = img.at(x, y, 0);
    }
  }
  std::vector<uint8_t> out;
  if (!cv::imencode(".png", bgr, out)) Fail(ErrorCode::kIoError, "PNG encoding failed");
  return out;
}

std::vector<uint8_t> ReadBinaryFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string ReadTextFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

Image ReadImageFile(const std::filesystem::path &path) {
  const auto bytes = ReadBinaryFile(path);
  return DecodeImage(bytes);
}

void WritePng(const Image &img, const std::filesystem::path &path) {
  const auto bytes = EncodePng(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace ocrkit
