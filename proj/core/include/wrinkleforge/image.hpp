/*
 * Copyright 2026 The WrinkleForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace wrinkleforge {

/// H x W x C raster of floating-point samples in [0, 1], stored row-major with
/// interleaved channels. Channel count is 1, 3 or 4.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels);
  /// Throws ShapeMismatch if the data length is wrong, CorruptData if a value
  /// falls outside [0, 1].
  Image(int height, int width, int channels, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(int y, int x, int c = 0) noexcept { return data_[index(y, x, c)]; }
  double operator()(int y, int x, int c = 0) const noexcept { return data_[index(y, x, c)]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  /// Extracts a single channel as a 1-channel image.
  Image channel(int c) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// H x W raster of exact {0, 1} values.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, std::uint8_t fill = 0);
  /// Throws ShapeMismatch on wrong length, NotBinary on any value other than 0 or 1.
  BinaryMask(int height, int width, std::vector<std::uint8_t> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept { return data_.size(); }

  std::uint8_t& operator()(int y, int x) noexcept { return data_[index(y, x)]; }
  std::uint8_t operator()(int y, int x) const noexcept { return data_[index(y, x)]; }

  std::span<std::uint8_t> values() noexcept { return data_; }
  std::span<const std::uint8_t> values() const noexcept { return data_; }

  std::size_t count() const noexcept;
  bool same_shape(const BinaryMask& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int y, int x) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Reads an 8- or 16-bit PNG with 1, 3 or 4 channels. Samples are divided by
/// the bit-depth maximum. Errors: MissingFile, UnsupportedFormat, CorruptData.
Image load_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG with samples round(v * 255), half rounded up.
/// Errors: IoFailure.
void save_png(const Image& img, const std::filesystem::path& path);

/// Masks are 8-bit grayscale PNGs holding only 0 and 255.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// round-half-up quantization used by every 8-bit writer.
std::uint8_t quantize8(double v) noexcept;

/// BT.601 luma: y = 0.299 r + 0.587 g + 0.114 b. Requires 3 channels.
Image to_grayscale(const Image& img);

/// out(y, x, c) = img(y, x, c) * mask(y, x).
Image apply_mask(const Image& img, const BinaryMask& mask);

/// Channel-wise concatenation of two images of equal spatial size.
Image concat_channels(const Image& a, const Image& b);

/// Bilinear resampling on pixel centers.
Image resize_bilinear(const Image& img, int height, int width);
/// Nearest-neighbour resampling; keeps masks binary.
BinaryMask resize_nearest(const BinaryMask& mask, int height, int width);

}  // namespace wrinkleforge
