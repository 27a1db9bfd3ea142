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

#include "wrinkleforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wrinkleforge {

namespace {

struct Mat2 {
  double a, b, c, d;  // [[a, b], [c, d]]
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

}  // namespace

GeometricTransform hflip_transform() {
  GeometricTransform t;
  t.inverse[0][0] = -1.0;
  t.identity = false;
  return t;
}

GeometricTransform sample_transform(const AugmentParams& params, int height, int width, Rng& rng) {
  Mat2 forward{1, 0, 0, 1};
  GeometricTransform t;
  if (params.hflip_p > 0 && rng.bernoulli(params.hflip_p)) {
    forward = Mat2{-1, 0, 0, 1} * forward;
    t.identity = false;
  }
  if (params.scale_p > 0 && rng.bernoulli(params.scale_p)) {
    const double s = rng.uniform(params.scale_min, params.scale_max);
    forward = Mat2{s, 0, 0, s} * forward;
    t.identity = false;
  }
  if (params.affine_p > 0 && rng.bernoulli(params.affine_p)) {
    const double deg = std::numbers::pi / 180.0;
    const double angle = rng.uniform(-params.max_rotate_deg, params.max_rotate_deg) * deg;
    const double shear = std::tan(rng.uniform(-params.max_shear_deg, params.max_shear_deg) * deg);
    forward = Mat2{std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle)} *
              Mat2{1, shear, 0, 1} * forward;
    t.shift_x = rng.uniform(-params.max_translate, params.max_translate) * width;
    t.shift_y = rng.uniform(-params.max_translate, params.max_translate) * height;
    t.identity = false;
  }
  const double det = forward.a * forward.d - forward.b * forward.c;
  t.inverse[0][0] = forward.d / det;
  t.inverse[0][1] = -forward.b / det;
  t.inverse[1][0] = -forward.c / det;
  t.inverse[1][1] = forward.a / det;
  return t;
}

namespace {

template <typename Fn>
void for_each_source(int height, int width, const GeometricTransform& t, Fn&& fn) {
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double ox = x - cx - t.shift_x;
      const double oy = y - cy - t.shift_y;
      const double sx = cx + t.inverse[0][0] * ox + t.inverse[0][1] * oy;
      const double sy = cy + t.inverse[1][0] * ox + t.inverse[1][1] * oy;
      fn(y, x, sy, sx);
    }
  }
}

}  // namespace

Image warp_bilinear(const Image& img, const GeometricTransform& t) {
  if (t.identity) return img;
  Image out(img.height(), img.width(), img.channels());
  const int h = img.height();
  const int w = img.width();
  for_each_source(h, w, t, [&](int y, int x, double sy, double sx) {
    const double fy = std::floor(sy);
    const double fx = std::floor(sx);
    const int y0 = static_cast<int>(fy);
    const int x0 = static_cast<int>(fx);
    const double wy = sy - fy;
    const double wx = sx - fx;
    for (int c = 0; c < img.channels(); ++c) {
      auto sample = [&](int yy, int xx) { return (yy >= 0 && yy < h && xx >= 0 && xx < w) ? img(yy, xx, c) : 0.0; };
      double v = (1 - wy) * ((1 - wx) * sample(y0, x0) + (wx > 0 ? wx * sample(y0, x0 + 1) : 0.0));
      if (wy > 0) v += wy * ((1 - wx) * sample(y0 + 1, x0) + (wx > 0 ? wx * sample(y0 + 1, x0 + 1) : 0.0));
      out(y, x, c) = std::clamp(v, 0.0, 1.0);
    }
  });
  return out;
}

BinaryMask warp_nearest(const BinaryMask& mask, const GeometricTransform& t) {
  if (t.identity) return mask;
  BinaryMask out(mask.height(), mask.width());
  for_each_source(mask.height(), mask.width(), t, [&](int y, int x, double sy, double sx) {
    const int yy = static_cast<int>(std::floor(sy + 0.5));
    const int xx = static_cast<int>(std::floor(sx + 0.5));
    if (yy >= 0 && yy < mask.height() && xx >= 0 && xx < mask.width()) out(y, x) = mask(yy, xx);
  });
  return out;
}

TrainingSample apply_transform(const TrainingSample& sample, const GeometricTransform& t) {
  TrainingSample out{warp_bilinear(sample.input, t), {}};
  if (const auto* target = std::get_if<Image>(&sample.target)) out.target = warp_bilinear(*target, t);
  else out.target = warp_nearest(std::get<BinaryMask>(sample.target), t);
  return out;
}

TrainingSample augment(const TrainingSample& sample, const AugmentParams& params, Rng& rng) {
  return apply_transform(sample, sample_transform(params, sample.input.height(), sample.input.width(), rng));
}

}  // namespace wrinkleforge
