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
#include <string>

#include <nlohmann/json.hpp>

#include "wrinkleforge/optim.hpp"
#include "wrinkleforge/unet.hpp"

namespace wrinkleforge {

enum class Stage { Pretrain, Finetune };

/// Network input for finetuning: face-masked RGB, optionally followed by the
/// weak label (texture / 255) as a fourth channel.
enum class InputMode { Rgb, RgbTexture };

struct AugmentParams {
  double hflip_p = 0.5;
  double scale_p = 0.0;
  double scale_min = 0.9;
  double scale_max = 1.1;
  double affine_p = 0.0;
  double max_rotate_deg = 10.0;
  double max_translate = 0.05;  // fraction of the image side
  double max_shear_deg = 5.0;

  friend bool operator==(const AugmentParams&, const AugmentParams&) = default;
};

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  friend bool operator==(const SplitFractions&, const SplitFractions&) = default;
};

struct TrainConfig {
  Stage stage = Stage::Pretrain;
  std::filesystem::path dataset_root;
  std::filesystem::path out_dir;
  InputMode input = InputMode::RgbTexture;
  int base_width = 16;
  int depth = 3;
  int epochs = 30;
  int batch_size = 8;
  SgdrSchedule schedule{10, 1e-3, 1.0, true};
  AdamWConfig optimizer;
  AugmentParams augment;
  SplitFractions split;
  std::uint64_t seed = 0;
  double label_fraction = 1.0;
  int image_size = 64;  // 0 keeps the stored resolution
  std::string truth_dir = "truth";
  std::string init_checkpoint_hash;  // optional guard on finetune --init
  bool record_wall_time = false;     // wall_ms in the journal breaks byte-identical reruns

  /// Throws InvalidConfig.
  void validate() const;
  int input_channels() const noexcept;
  /// Architecture implied by stage and input mode; seeded from `seed`.
  UNetSpec model_spec() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

/// Desk-scale defaults: 64x64 inputs, batch 8, 30 epochs, first SGDR period 10.
TrainConfig pretrain_preset();
TrainConfig finetune_preset();
/// Full-scale schedule (300 / 150 epochs, periods 100 / 50, native resolution).
TrainConfig full_scale_pretrain_preset();
TrainConfig full_scale_finetune_preset();

/// Hex SHA-256 of the canonical JSON of every setting that affects the
/// trained weights (paths excluded), together with the fixed architectural
/// choices (ReLU, nearest upsampling, no normalization).
std::string config_hash(const TrainConfig& c);

/// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace wrinkleforge
