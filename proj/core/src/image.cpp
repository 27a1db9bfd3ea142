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

#include "wrinkleforge/image.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

namespace {

void check_dims(int height, int width) {
  if (height <= 0 || width <= 0)
    throw Error(ErrorCode::ShapeMismatch, "image dimensions must be positive");
}

}  // namespace

Image::Image(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width);
  if (channels != 1 && channels != 3 && channels != 4)
    throw Error(ErrorCode::WrongChannelCount, "unsupported channel count " + std::to_string(channels));
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), 0.0);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : Image(height, width, channels) {
  if (data.size() != data_.size())
    throw Error(ErrorCode::ShapeMismatch, "image data length does not match dimensions");
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorCode::CorruptData, "image value outside [0, 1]");
  }
  data_ = std::move(data);
}

Image Image::channel(int c) const {
  if (c < 0 || c >= channels_)
    throw Error(ErrorCode::WrongChannelCount, "channel index out of range");
  Image out(height_, width_, 1);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out(y, x) = (*this)(y, x, c);
  return out;
}

BinaryMask::BinaryMask(int height, int width, std::uint8_t fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  if (fill > 1) throw Error(ErrorCode::NotBinary, "mask fill must be 0 or 1");
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint8_t> data)
    : BinaryMask(height, width) {
  if (data.size() != data_.size())
    throw Error(ErrorCode::ShapeMismatch, "mask data length does not match dimensions");
  if (std::any_of(data.begin(), data.end(), [](std::uint8_t v) { return v > 1; }))
    throw Error(ErrorCode::NotBinary, "mask values must be 0 or 1");
  data_ = std::move(data);
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

// ---------------------------------------------------------------------------
// PNG

namespace {

struct MemoryReader {
  const unsigned char* data;
  std::size_t size;
  std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->offset + length > reader->size) png_error(png, "unexpected end of data");
  std::memcpy(out, reader->data + reader->offset, length);
  reader->offset += length;
}

void silent_warning(png_structp, png_const_charp) {}
[[noreturn]] void silent_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }

struct DecodedPng {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int channels = 0;
  std::vector<unsigned char> pixels;
};

enum class DecodeStatus { Ok, Corrupt, Unsupported };

DecodeStatus decode_png(const std::vector<unsigned char>& bytes, DecodedPng& out) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) return DecodeStatus::Corrupt;

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, silent_error, silent_warning);
  if (png == nullptr) return DecodeStatus::Corrupt;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return DecodeStatus::Corrupt;
  }
  MemoryReader reader{bytes.data(), bytes.size(), 0};
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::Corrupt;
  }

  png_set_read_fn(png, &reader, read_from_memory);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE || color == PNG_COLOR_TYPE_GRAY_ALPHA ||
      (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::Unsupported;
  }
  if (depth == 16) png_set_swap(png);  // host order (little-endian) samples
  png_read_update_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.bit_depth = depth;
  out.channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out.pixels.resize(rowbytes * out.height);
  rows.resize(out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) rows[y] = out.pixels.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return DecodeStatus::Ok;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(ErrorCode::MissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_png8(const std::filesystem::path& path, int height, int width, int channels,
                const std::vector<unsigned char>& pixels) {
  if (channels != 1 && channels != 3 && channels != 4)
    throw Error(ErrorCode::WrongChannelCount, "PNG output supports 1, 3 or 4 channels");
  const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_RGBA;

  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (fp == nullptr) throw Error(ErrorCode::IoFailure, "cannot open for writing: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, silent_error, silent_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(ErrorCode::IoFailure, "libpng allocation failed");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  for (int y = 0; y < height; ++y)
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * stride);

  bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, fp);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) failed = true;
  if (failed) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

}  // namespace

Image load_png(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  DecodedPng png;
  switch (decode_png(bytes, png)) {
    case DecodeStatus::Corrupt:
      throw Error(ErrorCode::CorruptData, path.string());
    case DecodeStatus::Unsupported:
      throw Error(ErrorCode::UnsupportedFormat, path.string());
    case DecodeStatus::Ok:
      break;
  }
  if (png.channels != 1 && png.channels != 3 && png.channels != 4)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": channel count");

  Image img(static_cast<int>(png.height), static_cast<int>(png.width), png.channels);
  auto out = img.values();
  if (png.bit_depth == 8) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = png.pixels[i] / 255.0;
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::uint16_t s;
      std::memcpy(&s, png.pixels.data() + 2 * i, 2);
      out[i] = s / 65535.0;
    }
  }
  return img;
}

std::uint8_t quantize8(double v) noexcept {
  const double scaled = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

void save_png(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw Error(ErrorCode::IoFailure, "cannot save an empty image");
  std::vector<unsigned char> pixels(img.values().size());
  std::transform(img.values().begin(), img.values().end(), pixels.begin(), quantize8);
  write_png8(path, img.height(), img.width(), img.channels(), pixels);
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const Image img = load_png(path);
  if (img.channels() != 1)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": masks must be grayscale");
  std::vector<std::uint8_t> data(img.pixel_count());
  auto values = img.values();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (values[i] == 0.0) data[i] = 0;
    else if (values[i] == 1.0) data[i] = 1;
    else throw Error(ErrorCode::NotBinary, path.string() + ": sample outside {0, 255}");
  }
  return BinaryMask(img.height(), img.width(), std::move(data));
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<unsigned char> pixels(mask.pixel_count());
  std::transform(mask.values().begin(), mask.values().end(), pixels.begin(),
                 [](std::uint8_t v) { return static_cast<unsigned char>(v ? 255 : 0); });
  write_png8(path, mask.height(), mask.width(), 1, pixels);
}

Image to_grayscale(const Image& img) {
  if (img.channels() != 3)
    throw Error(ErrorCode::WrongChannelCount, "to_grayscale expects 3 channels");
  Image out(img.height(), img.width(), 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double v = 0.299 * img(y, x, 0) + 0.587 * img(y, x, 1) + 0.114 * img(y, x, 2);
      out(y, x) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

Image apply_mask(const Image& img, const BinaryMask& mask) {
  if (img.height() != mask.height() || img.width() != mask.width())
    throw Error(ErrorCode::ShapeMismatch, "image and mask sizes differ");
  Image out = img;
  const int channels = img.channels();
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (mask(y, x) == 0)
        for (int c = 0; c < channels; ++c) out(y, x, c) = 0.0;
  return out;
}

Image concat_channels(const Image& a, const Image& b) {
  if (a.height() != b.height() || a.width() != b.width())
    throw Error(ErrorCode::ShapeMismatch, "concat_channels: spatial sizes differ");
  Image out(a.height(), a.width(), a.channels() + b.channels());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) out(y, x, c) = a(y, x, c);
      for (int c = 0; c < b.channels(); ++c) out(y, x, a.channels() + c) = b(y, x, c);
    }
  }
  return out;
}

Image resize_bilinear(const Image& img, int height, int width) {
  if (height == img.height() && width == img.width()) return img;
  Image out(height, width, img.channels());
  const double sy = static_cast<double>(img.height()) / height;
  const double sx = static_cast<double>(img.width()) / width;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < img.channels(); ++c) {
        const double top = img(y0, x0, c) * (1 - wx) + img(y0, x1, c) * wx;
        const double bottom = img(y1, x0, c) * (1 - wx) + img(y1, x1, c) * wx;
        out(y, x, c) = std::clamp(top * (1 - wy) + bottom * wy, 0.0, 1.0);
      }
    }
  }
  return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int height, int width) {
  if (height == mask.height() && width == mask.width()) return mask;
  BinaryMask out(height, width);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(mask.height() - 1, static_cast<int>((y + 0.5) * mask.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(mask.width() - 1, static_cast<int>((x + 0.5) * mask.width() / width));
      out(y, x) = mask(sy, sx);
    }
  }
  return out;
}

}  // namespace wrinkleforge
