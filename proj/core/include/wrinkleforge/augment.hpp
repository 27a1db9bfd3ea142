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

#include <variant>

#include "wrinkleforge/config.hpp"
#include "wrinkleforge/image.hpp"
#include "wrinkleforge/rng.hpp"

namespace wrinkleforge {

/// Maps output pixel coordinates back to source coordinates:
///   src = center + inverse * (out - center - shift)
struct GeometricTransform {
  double inverse[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  double shift_x = 0.0;
  double shift_y = 0.0;
  bool identity = true;
};

/// Horizontal flip with probability hflip_p, isotropic zoom with probability
/// scale_p, and rotation/shear/translation with probability affine_p.
GeometricTransform sample_transform(const AugmentParams& params, int height, int width, Rng& rng);

/// A flip-only transform, mostly for tests.
GeometricTransform hflip_transform();

/// Bilinear resampling; samples falling outside the source read as 0.
Image warp_bilinear(const Image& img, const GeometricTransform& t);
/// Nearest-neighbour resampling; output stays binary.
BinaryMask warp_nearest(const BinaryMask& mask, const GeometricTransform& t);

/// Network input plus either a continuous target (texture / 255) or a mask.
struct TrainingSample {
  Image input;
  std::variant<Image, BinaryMask> target;
};

/// Draws one transform and applies it to input and target alike.
TrainingSample augment(const TrainingSample& sample, const AugmentParams& params, Rng& rng);

TrainingSample apply_transform(const TrainingSample& sample, const GeometricTransform& t);

}  // namespace wrinkleforge
