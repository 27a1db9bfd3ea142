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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrinkleforge/checkpoint.hpp"
#include "wrinkleforge/config.hpp"
#include "wrinkleforge/dataset.hpp"
#include "wrinkleforge/metrics.hpp"
#include "wrinkleforge/texture.hpp"

namespace wrinkleforge {

/// One line of journal.jsonl.
struct JournalEntry {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double val_metric = 0.0;
  std::optional<double> wall_ms;

  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

nlohmann::json to_json(const JournalEntry& entry);

struct TrainResult {
  Checkpoint checkpoint;  // best on the validation metric
  std::vector<JournalEntry> journal;
  double initial_val_metric = 0.0;  // before the first update
  double best_val_metric = 0.0;
  int best_epoch = 0;               // 0 when no epoch beat the initial weights
  SplitManifest split;
  std::vector<std::string> train_ids;  // after label subsampling
};

/// Stage 1: masked RGB -> masked texture map / 255 with MSE. Keeps the
/// checkpoint with the lowest validation MSE. When config.out_dir is set,
/// writes journal.jsonl, checkpoint.wrnk, config.json and timing.jsonl there.
TrainResult pretrain(const TrainConfig& config);

/// Stage 2: wrinkle/background segmentation with soft Dice on softmax
/// probabilities. With `init`, the pretrained weights are adapted by
/// adapt_for_finetune; without it a fresh model is built. Keeps the
/// checkpoint with the highest validation micro-JSI.
TrainResult finetune(const TrainConfig& config, const std::optional<Checkpoint>& init = std::nullopt);

/// Expands the input channels to config.input_channels() and swaps in a
/// two-class head drawn from config.seed. IncompatibleCheckpoint when the
/// checkpoint has more input channels or a different width or depth.
Checkpoint adapt_for_finetune(const Checkpoint& init, const TrainConfig& config);

/// Wrinkle mask from a segmentation checkpoint. The network sees the
/// face-masked image, followed by texture / 255 when the model takes four
/// channels. A pixel is wrinkle only when its wrinkle probability is strictly
/// larger than the background probability.
BinaryMask predict(const Checkpoint& ckpt, const Image& img, const BinaryMask& face, const TextureMap& texture);

/// Same rule applied to a batch of prepared network inputs.
std::vector<BinaryMask> predict_inputs(Model& model, const std::vector<Image>& inputs);

/// Micro-averaged metrics of a segmentation checkpoint on the given ids.
EvalResult evaluate_checkpoint(const Checkpoint& ckpt, const TrainConfig& config, const std::vector<std::string>& ids);

}  // namespace wrinkleforge
