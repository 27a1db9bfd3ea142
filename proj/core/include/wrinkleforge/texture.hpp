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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wrinkleforge/image.hpp"

namespace wrinkleforge {

/// Normalized 2-D Gaussian. The dense weights and the 1-D factor whose outer
/// product reproduces them are both kept; filtering uses the factor.
class GaussianKernel {
 public:
  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  double sigma() const noexcept { return sigma_; }
  /// Row-major size x size weights summing to 1.
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(int dy, int dx) const noexcept {
    return weights_[static_cast<std::size_t>((dy + radius()) * size_ + (dx + radius()))];
  }
  /// Normalized 1-D factor of length size.
  std::span<const double> factor() const noexcept { return factor_; }

  friend GaussianKernel make_gaussian(int size, double sigma);

 private:
  int size_ = 1;
  double sigma_ = 1.0;
  std::vector<double> weights_;
  std::vector<double> factor_;
};

/// w(i, j) proportional to exp(-(i^2 + j^2) / (2 sigma^2)), normalized to sum 1.
/// Throws InvalidKernelSpec for an even size or non-positive sigma.
GaussianKernel make_gaussian(int size, double sigma);

/// Kernel used for weak-label generation: 21 x 21, sigma 5.
GaussianKernel default_texture_kernel();

/// Maps any integer index into [0, n) by reflect-101 (edge not repeated).
int reflect101(int index, int n) noexcept;

/// Separable Gaussian blur with reflect-101 borders. Single-channel only.
Image gaussian_blur(const Image& img, const GaussianKernel& kernel);

/// Texture response T in [0, 255].
class TextureMap {
 public:
  TextureMap() = default;
  TextureMap(int height, int width);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  double& operator()(int y, int x) noexcept { return data_[index(y, x)]; }
  double operator()(int y, int x) const noexcept { return data_[index(y, x)]; }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  /// T / 255 as a 1-channel image; the form fed to the network.
  Image normalized() const;
  /// Inverse of normalized(): 255 * img.
  static TextureMap from_normalized(const Image& img);

 private:
  std::size_t index(int y, int x) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// T = (1 - I / (1 + I_G)) * 255 on the 0-255 intensity scale, clamped to [0, 255].
TextureMap texture_map(const Image& gray, const GaussianKernel& kernel);

/// texture_map(to_grayscale(img)) with every non-face pixel set to 0.
TextureMap weak_label(const Image& img, const BinaryMask& face, const GaussianKernel& kernel);

/// 8-bit persistence of a texture map (sample = round(T)).
void save_texture(const TextureMap& map, const std::filesystem::path& path);
TextureMap load_texture(const std::filesystem::path& path);

struct BatchFailure {
  std::string id;
  std::string reason;
};

struct BatchReport {
  std::size_t processed = 0;
  std::vector<BatchFailure> failed;  // sorted by id
};

/// Writes out_dir/<id>.png for every src_dir/<id>.png that has a matching
/// mask_dir/<id>.png. Per-file failures are collected, never thrown. Output
/// bytes do not depend on `jobs`.
BatchReport batch_weak_labels(const std::filesystem::path& src_dir,
                              const std::filesystem::path& mask_dir,
                              const std::filesystem::path& out_dir,
                              const GaussianKernel& kernel, unsigned jobs = 0);

/// Sorted ids (file stems) of *.png files in a directory.
std::vector<std::string> list_png_ids(const std::filesystem::path& dir);

}  // namespace wrinkleforge
