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

#include "wrinkleforge/texture.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

GaussianKernel make_gaussian(int size, double sigma) {
  if (size < 1 || size % 2 == 0)
    throw Error(ErrorCode::InvalidKernelSpec, "kernel size must be odd and >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::InvalidKernelSpec, "sigma must be positive");

  GaussianKernel k;
  k.size_ = size;
  k.sigma_ = sigma;
  const int r = size / 2;
  const double denom = 2.0 * sigma * sigma;

  k.factor_.resize(static_cast<std::size_t>(size));
  double total1 = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double w = std::exp(-(i * i) / denom);
    k.factor_[static_cast<std::size_t>(i + r)] = w;
    total1 += w;
  }
  for (double& w : k.factor_) w /= total1;

  k.weights_.resize(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  double total2 = 0.0;
  for (int i = -r; i <= r; ++i) {
    for (int j = -r; j <= r; ++j) {
      const double w = std::exp(-(i * i + j * j) / denom);
      k.weights_[static_cast<std::size_t>((i + r) * size + (j + r))] = w;
      total2 += w;
    }
  }
  for (double& w : k.weights_) w /= total2;
  return k;
}

GaussianKernel default_texture_kernel() { return make_gaussian(21, 5.0); }

int reflect101(int index, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  int m = index % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

Image gaussian_blur(const Image& img, const GaussianKernel& kernel) {
  if (img.channels() != 1)
    throw Error(ErrorCode::WrongChannelCount, "gaussian_blur expects a single channel");
  const int h = img.height();
  const int w = img.width();
  const int r = kernel.radius();
  const auto g = kernel.factor();

  std::vector<int> xmap(static_cast<std::size_t>(w + 2 * r));
  for (int i = 0; i < w + 2 * r; ++i) xmap[static_cast<std::size_t>(i)] = reflect101(i - r, w);
  std::vector<int> ymap(static_cast<std::size_t>(h + 2 * r));
  for (int i = 0; i < h + 2 * r; ++i) ymap[static_cast<std::size_t>(i)] = reflect101(i - r, h);

  const auto src = img.values();
  std::vector<double> rows(src.size());
  for (int y = 0; y < h; ++y) {
    const double* in = src.data() + static_cast<std::size_t>(y) * w;
    double* out = rows.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kernel.size(); ++k) acc += g[static_cast<std::size_t>(k)] * in[xmap[static_cast<std::size_t>(x + k)]];
      out[x] = acc;
    }
  }

  Image out(h, w, 1);
  auto dst = out.values();
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int k = 0; k < kernel.size(); ++k) {
      const double gk = g[static_cast<std::size_t>(k)];
      const double* in = rows.data() + static_cast<std::size_t>(ymap[static_cast<std::size_t>(y + k)]) * w;
      for (int x = 0; x < w; ++x) acc[static_cast<std::size_t>(x)] += gk * in[x];
    }
    for (int x = 0; x < w; ++x)
      dst[static_cast<std::size_t>(y) * w + x] = std::clamp(acc[static_cast<std::size_t>(x)], 0.0, 1.0);
  }
  return out;
}

TextureMap::TextureMap(int height, int width) : height_(height), width_(width) {
  if (height <= 0 || width <= 0)
    throw Error(ErrorCode::ShapeMismatch, "texture map dimensions must be positive");
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0.0);
}

Image TextureMap::normalized() const {
  Image out(height_, width_, 1);
  auto dst = out.values();
  for (std::size_t i = 0; i < data_.size(); ++i) dst[i] = std::clamp(data_[i] / 255.0, 0.0, 1.0);
  return out;
}

TextureMap TextureMap::from_normalized(const Image& img) {
  if (img.channels() != 1)
    throw Error(ErrorCode::WrongChannelCount, "texture maps are single-channel");
  TextureMap out(img.height(), img.width());
  auto src = img.values();
  for (std::size_t i = 0; i < src.size(); ++i) out.data_[i] = src[i] * 255.0;
  return out;
}

TextureMap texture_map(const Image& gray, const GaussianKernel& kernel) {
  if (gray.channels() != 1)
    throw Error(ErrorCode::WrongChannelCount, "texture_map expects a single channel");
  const Image blurred = gaussian_blur(gray, kernel);
  TextureMap out(gray.height(), gray.width());
  auto src = gray.values();
  auto smooth = blurred.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double intensity = src[i] * 255.0;
    const double local_mean = smooth[i] * 255.0;
    const double t = (1.0 - intensity / (1.0 + local_mean)) * 255.0;
    dst[i] = std::clamp(t, 0.0, 255.0);
  }
  return out;
}

TextureMap weak_label(const Image& img, const BinaryMask& face, const GaussianKernel& kernel) {
  if (img.height() != face.height() || img.width() != face.width())
    throw Error(ErrorCode::ShapeMismatch, "image and face mask sizes differ");
  TextureMap t = texture_map(to_grayscale(img), kernel);
  auto dst = t.values();
  auto m = face.values();
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (m[i] == 0) dst[i] = 0.0;
  return t;
}

void save_texture(const TextureMap& map, const std::filesystem::path& path) {
  save_png(map.normalized(), path);
}

TextureMap load_texture(const std::filesystem::path& path) {
  const Image img = load_png(path);
  if (img.channels() != 1)
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": texture maps are grayscale");
  return TextureMap::from_normalized(img);
}

std::vector<std::string> list_png_ids(const std::filesystem::path& dir) {
  std::vector<std::string> ids;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return ids;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

BatchReport batch_weak_labels(const std::filesystem::path& src_dir,
                              const std::filesystem::path& mask_dir,
                              const std::filesystem::path& out_dir,
                              const GaussianKernel& kernel, unsigned jobs) {
  const auto ids = list_png_ids(src_dir);
  BatchReport report;
  if (ids.empty()) return report;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string());

  std::vector<std::optional<BatchFailure>> outcome(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      const std::string& id = ids[i];
      const auto mask_path = mask_dir / (id + ".png");
      try {
        if (!std::filesystem::is_regular_file(mask_path)) {
          outcome[i] = BatchFailure{id, std::string(to_string(ErrorCode::MissingMask))};
          continue;
        }
        const Image img = load_png(src_dir / (id + ".png"));
        const BinaryMask face = load_mask(mask_path);
        save_texture(weak_label(img, face, kernel), out_dir / (id + ".png"));
      } catch (const std::exception& e) {
        outcome[i] = BatchFailure{id, e.what()};
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(ids.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  for (auto& o : outcome) {
    if (o) report.failed.push_back(std::move(*o));
    else ++report.processed;
  }
  return report;
}

}  // namespace wrinkleforge
