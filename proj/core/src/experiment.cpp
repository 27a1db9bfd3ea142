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

#include "wrinkleforge/experiment.hpp"

#include <fstream>

#include "wrinkleforge/dataset.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/texture.hpp"
#include "wrinkleforge/trainer.hpp"

namespace wrinkleforge {

void ExperimentConfig::set_seed(std::uint64_t seed) {
  pretrain.seed = seed;
  finetune.seed = seed;
}

void ExperimentConfig::set_dataset_root(const std::filesystem::path& root) {
  pretrain.dataset_root = root;
  finetune.dataset_root = root;
}

ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("pretrain") || !j.contains("finetune"))
    throw Error(ErrorCode::InvalidConfig, "experiment config needs \"pretrain\" and \"finetune\" objects");
  ExperimentConfig c;
  try {
    c.pretrain = j.at("pretrain").get<TrainConfig>();
    c.finetune = j.at("finetune").get<TrainConfig>();
    if (j.contains("dataset_root")) c.set_dataset_root(j.at("dataset_root").get<std::string>());
    if (j.contains("seed")) c.set_seed(j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.pretrain.stage = Stage::Pretrain;
  c.finetune.stage = Stage::Finetune;
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"pretrain", nlohmann::json(c.pretrain)}, {"finetune", nlohmann::json(c.finetune)}};
}

const ExperimentRow& ExperimentReport::row(const std::string& pretraining, const std::string& input) const {
  for (const auto& r : rows)
    if (r.pretraining == pretraining && r.input == input) return r;
  throw Error(ErrorCode::InvalidConfig, "no experiment row " + pretraining + "/" + input);
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j = to_json(row.test);
    j["pretraining"] = row.pretraining;
    j["input"] = row.input;
    j["best_epoch"] = row.best_epoch;
    j["best_val_jsi"] = row.best_val_jsi;
    rows.push_back(std::move(j));
  }
  return {{"seed", r.seed}, {"labeled_images", r.labeled_images}, {"test_images", r.test_images}, {"rows", rows}};
}

void ensure_weak_labels(const std::filesystem::path& root) {
  const auto ids = dataset_ids(root);
  const auto dir = root / layout::kWeakLabels;
  std::error_code ec;
  bool complete = std::filesystem::is_directory(dir, ec);
  for (std::size_t i = 0; complete && i < ids.size(); ++i)
    complete = std::filesystem::is_regular_file(dir / (ids[i] + ".png"), ec);
  if (complete) return;
  const auto report = batch_weak_labels(root / layout::kImages, root / layout::kFaceMasks, dir, default_texture_kernel());
  if (!report.failed.empty())
    throw Error(ErrorCode::DatasetMissing,
                "weak label generation failed for " + report.failed.front().id + ": " + report.failed.front().reason);
}

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  config.pretrain.validate();
  config.finetune.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out_dir.string());
  write_json(out_dir / "experiment.json", to_json(config));

  ensure_weak_labels(config.pretrain.dataset_root);
  if (config.finetune.dataset_root != config.pretrain.dataset_root) ensure_weak_labels(config.finetune.dataset_root);

  TrainConfig pre = config.pretrain;
  pre.stage = Stage::Pretrain;
  pre.out_dir = out_dir / "pretrain";
  const TrainResult pretrained = pretrain(pre);

  ExperimentReport report;
  report.seed = config.finetune.seed;
  for (const char* init : {"none", "texture"}) {
    for (const char* input : {"rgb", "rgb_texture"}) {
      TrainConfig ft = config.finetune;
      ft.stage = Stage::Finetune;
      ft.input = std::string(input) == "rgb" ? InputMode::Rgb : InputMode::RgbTexture;
      ft.out_dir = out_dir / ("finetune_" + std::string(init) + "_" + input);
      const bool use_init = std::string(init) == "texture";
      const TrainResult run = finetune(ft, use_init ? std::optional<Checkpoint>(pretrained.checkpoint) : std::nullopt);

      ExperimentRow row;
      row.pretraining = init;
      row.input = input;
      row.test = evaluate_checkpoint(run.checkpoint, ft, run.split.test);
      row.best_epoch = run.best_epoch;
      row.best_val_jsi = run.best_val_metric;
      report.rows.push_back(row);
      report.labeled_images = run.train_ids.size();
      report.test_images = run.split.test.size();
    }
  }
  write_json(out_dir / "report.json", to_json(report));
  return report;
}

}  // namespace wrinkleforge
