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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wrinkleforge/unet.hpp"

namespace wrinkleforge {

struct NamedArray {
  std::string name;
  std::vector<int> shape;
  std::vector<float> values;

  friend bool operator==(const NamedArray&, const NamedArray&) = default;
};

/// Immutable snapshot of a model plus the optimizer state needed to resume.
struct Checkpoint {
  UNetSpec spec;
  std::vector<NamedArray> parameters;       // in layer_inventory order
  std::vector<NamedArray> optimizer_state;  // free-form, e.g. "adamw.m/<param>"
  std::int64_t epoch = 0;
  std::uint64_t optimizer_step = 0;
  std::string config_hash;

  const NamedArray* find_parameter(const std::string& name) const noexcept;
  std::size_t parameter_count() const noexcept;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Throws IncompatibleCheckpoint unless the parameter list matches the
/// spec's inventory name for name and shape for shape.
void check_inventory(const Checkpoint& ckpt);

// File layout: the five magic bytes "WRNK1", an unsigned 64-bit little-endian
// header length, a JSON header (spec, epoch, optimizer_step, config_hash, and
// the name/shape of every array), then the arrays as little-endian float32 in
// header order: parameters first, optimizer state second.
std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// CorruptCheckpoint on malformed or truncated files. When `expected_hash`
/// is given and differs from the stored config_hash, HashMismatch unless
/// `force` is set.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<std::string>& expected_hash = std::nullopt,
                           bool force = false);

/// Grows the first convolution to `new_in` input channels. The added kernel
/// slices are zero, so the network computes the same function of the
/// original channels. ShrinkNotSupported unless new_in > current.
Checkpoint expand_input_channels(const Checkpoint& ckpt, int new_in);

/// Re-draws the final 1x1 convolution for `new_out` channels from `seed`;
/// every other parameter is copied bit for bit. A single-channel head is a
/// regression head, anything wider is a segmentation head.
Checkpoint replace_head(const Checkpoint& ckpt, int new_out, std::uint64_t seed);

}  // namespace wrinkleforge
