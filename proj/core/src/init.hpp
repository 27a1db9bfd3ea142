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

#include <cmath>
#include <cstdint>
#include <vector>

#include "wrinkleforge/rng.hpp"
#include "wrinkleforge/unet.hpp"

namespace wrinkleforge::detail {

/// He-normal draw for weights (std = sqrt(2 / fan_in)); biases come back zero.
inline std::vector<float> he_normal(const ParameterShape& p, std::uint64_t key) {
  std::vector<float> out(p.element_count(), 0.0f);
  if (p.shape.size() != 4) return out;
  const double fan_in = static_cast<double>(p.shape[1]) * p.shape[2] * p.shape[3];
  const double stddev = std::sqrt(2.0 / fan_in);
  Rng rng(key);
  for (auto& v : out) v = static_cast<float>(rng.normal() * stddev);
  return out;
}

}  // namespace wrinkleforge::detail
