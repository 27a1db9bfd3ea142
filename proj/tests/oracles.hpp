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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "wrinkleforge/image.hpp"
#include "wrinkleforge/rng.hpp"

// Reference implementations written directly from the defining formulas.
// They share no code with the library beyond the container types.
namespace oracle {

using wrinkleforge::BinaryMask;
using wrinkleforge::Image;

inline int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

inline std::vector<double> gaussian_weights(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  const int r = size / 2;
  double total = 0.0;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) {
      const double v = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
      w[static_cast<std::size_t>((i + r) * size + (j + r))] = v;
      total += v;
    }
  for (double& v : w) v /= total;
  return w;
}

/// Dense 2-D convolution with mirrored borders, single channel.
inline Image dense_blur(const Image& img, const std::vector<double>& w, int size) {
  const int r = size / 2;
  Image out(img.height(), img.width(), 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i)
        for (int j = -r; j <= r; ++j)
          acc += w[static_cast<std::size_t>((i + r) * size + (j + r))] *
                 img(mirror(y + i, img.height()), mirror(x + j, img.width()));
      out(y, x) = acc;
    }
  return out;
}

/// T = (1 - I / (1 + I_G)) * 255 with I on the 0-255 scale, clamped.
inline double texture_value(double intensity255, double blurred255) {
  const double t = (1.0 - intensity255 / (1.0 + blurred255)) * 255.0;
  return t < 0.0 ? 0.0 : (t > 255.0 ? 255.0 : t);
}

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Counts enumerate(const BinaryMask& pred, const BinaryMask& truth) {
  Counts c;
  for (int y = 0; y < pred.height(); ++y)
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred(y, x) == 1;
      const bool t = truth(y, x) == 1;
      if (p && t) ++c.tp;
      else if (p) ++c.fp;
      else if (t) ++c.fn;
      else ++c.tn;
    }
  return c;
}

inline double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline double jsi(const Counts& c) {
  if (c.tp + c.fp + c.fn == 0) return 1.0;
  return ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp + c.fn));
}
inline double precision(const Counts& c) { return ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp)); }
inline double recall(const Counts& c) { return ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn)); }
inline double f1(const Counts& c) {
  if (c.tp + c.fp + c.fn == 0) return 1.0;
  return ratio(2.0 * static_cast<double>(c.tp), static_cast<double>(2 * c.tp + c.fp + c.fn));
}
inline double accuracy(const Counts& c) {
  return ratio(static_cast<double>(c.tp + c.tn), static_cast<double>(c.tp + c.fp + c.fn + c.tn));
}

inline BinaryMask vote(const std::vector<BinaryMask>& masks, int threshold) {
  BinaryMask out(masks.front().height(), masks.front().width());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      int n = 0;
      for (const auto& m : masks) n += m(y, x);
      out(y, x) = n >= threshold ? 1 : 0;
    }
  return out;
}

inline BinaryMask random_mask(wrinkleforge::Rng& rng, int h, int w, double p = 0.5) {
  BinaryMask m(h, w);
  for (auto& v : m.values()) v = rng.bernoulli(p) ? 1 : 0;
  return m;
}

inline Image random_image(wrinkleforge::Rng& rng, int h, int w, int c) {
  Image img(h, w, c);
  for (auto& v : img.values()) v = rng.uniform();
  return img;
}

/// Central difference of f with respect to x.
inline double central_difference(const std::function<double()>& f, double& x, double h) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

inline double relative_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wrinkleforge_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  if (FILE* f = std::fopen(path.string().c_str(), "rb")) {
    std::uint8_t buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) bytes.insert(bytes.end(), buf, buf + n);
    std::fclose(f);
  }
  return bytes;
}

}  // namespace oracle
