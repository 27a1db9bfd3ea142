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
#include <vector>

#include <nlohmann/json.hpp>

#include "wrinkleforge/config.hpp"
#include "wrinkleforge/metrics.hpp"

namespace wrinkleforge {

/// A pretrain/finetune configuration pair. In JSON:
///   {"dataset_root": ..., "seed": ..., "pretrain": {...}, "finetune": {...}}
/// where the top-level dataset_root and seed, when present, override both stages.
struct ExperimentConfig {
  TrainConfig pretrain = pretrain_preset();
  TrainConfig finetune = finetune_preset();

  void set_seed(std::uint64_t seed);
  void set_dataset_root(const std::filesystem::path& root);
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

struct ExperimentRow {
  std::string pretraining;  // "none" or "texture"
  std::string input;        // "rgb" or "rgb_texture"
  EvalResult test;
  int best_epoch = 0;
  double best_val_jsi = 0.0;
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  std::size_t labeled_images = 0;
  std::size_t test_images = 0;
  std::vector<ExperimentRow> rows;  // none/rgb, none/rgb_texture, texture/rgb, texture/rgb_texture

  const ExperimentRow& row(const std::string& pretraining, const std::string& input) const;
};

nlohmann::json to_json(const ExperimentReport& r);

/// Writes weak_labels/ for every image lacking one. Throws the first
/// per-file failure.
void ensure_weak_labels(const std::filesystem::path& dataset_root);

/// Pretrains once, then finetunes the four combinations of initialisation
/// (none, texture pretraining) and input (RGB, RGB + texture), evaluating
/// each best-validation checkpoint on the test split. Each run writes into
/// its own subdirectory of out_dir; the table goes to out_dir/report.json.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace wrinkleforge
