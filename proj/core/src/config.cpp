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

#include "wrinkleforge/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (std::abs(split.train + split.val + split.test - 1.0) > 1e-9) fail("split fractions must sum to 1");
  if (split.train <= 0 || split.val < 0 || split.test < 0) fail("split fractions must be non-negative");
  if (!(label_fraction > 0.0 && label_fraction <= 1.0)) fail("label_fraction must lie in (0, 1]");
  if (epochs < 0) fail("epochs must be >= 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (base_width < 1 || depth < 1) fail("base_width and depth must be >= 1");
  if (image_size < 0 || (image_size > 0 && image_size % (1 << depth) != 0))
    fail("image_size must be a multiple of 2^depth");
  if (schedule.initial_period < 1) fail("schedule.initial_period must be >= 1");
  if (augment.scale_min <= 0 || augment.scale_max < augment.scale_min) fail("invalid augment scale range");
}

int TrainConfig::input_channels() const noexcept {
  if (stage == Stage::Pretrain) return 3;
  return input == InputMode::Rgb ? 3 : 4;
}

UNetSpec TrainConfig::model_spec() const {
  UNetSpec spec;
  spec.in_channels = input_channels();
  spec.out_channels = stage == Stage::Pretrain ? 1 : 2;
  spec.head = stage == Stage::Pretrain ? HeadKind::Regression : HeadKind::Segmentation;
  spec.base_width = base_width;
  spec.depth = depth;
  spec.seed = seed;
  return spec;
}

namespace {

nlohmann::json augment_json(const AugmentParams& a) {
  return {{"hflip_p", a.hflip_p},         {"scale_p", a.scale_p},
          {"scale_range", {a.scale_min, a.scale_max}},
          {"affine_p", a.affine_p},       {"max_rotate_deg", a.max_rotate_deg},
          {"max_translate", a.max_translate}, {"max_shear_deg", a.max_shear_deg}};
}

AugmentParams augment_from(const nlohmann::json& j, AugmentParams a) {
  a.hflip_p = j.value("hflip_p", a.hflip_p);
  a.scale_p = j.value("scale_p", a.scale_p);
  if (j.contains("scale_range")) {
    const auto r = j.at("scale_range").get<std::vector<double>>();
    if (r.size() != 2) throw Error(ErrorCode::InvalidConfig, "scale_range needs two values");
    a.scale_min = r[0];
    a.scale_max = r[1];
  }
  a.affine_p = j.value("affine_p", a.affine_p);
  a.max_rotate_deg = j.value("max_rotate_deg", a.max_rotate_deg);
  a.max_translate = j.value("max_translate", a.max_translate);
  a.max_shear_deg = j.value("max_shear_deg", a.max_shear_deg);
  return a;
}

nlohmann::json hashed_fields(const TrainConfig& c) {
  nlohmann::json j = c;
  j.erase("dataset_root");
  j.erase("out_dir");
  j.erase("record_wall_time");
  j["architecture"] = {{"activation", "relu"}, {"upsample", "nearest"}, {"normalization", "none"},
                       {"dice_smooth", 1e-6}, {"format", "WRNK1"}};
  return j;
}

}  // namespace

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"stage", c.stage == Stage::Pretrain ? "pretrain" : "finetune"},
       {"dataset_root", c.dataset_root.generic_string()},
       {"out_dir", c.out_dir.generic_string()},
       {"input", c.input == InputMode::Rgb ? "rgb" : "rgb_texture"},
       {"spec", {{"base_width", c.base_width}, {"depth", c.depth}}},
       {"epochs", c.epochs},
       {"batch_size", c.batch_size},
       {"schedule", c.schedule},
       {"optimizer", c.optimizer},
       {"augment", augment_json(c.augment)},
       {"split", {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}}},
       {"seed", c.seed},
       {"label_fraction", c.label_fraction},
       {"image_size", c.image_size},
       {"truth_dir", c.truth_dir},
       {"init_checkpoint_hash", c.init_checkpoint_hash},
       {"record_wall_time", c.record_wall_time}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  static const char* const known[] = {"stage",     "dataset_root", "out_dir",        "input",
                                      "spec",      "epochs",       "batch_size",     "schedule",
                                      "optimizer", "augment",      "split",          "seed",
                                      "label_fraction", "image_size", "truth_dir",   "init_checkpoint_hash",
                                      "record_wall_time"};
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "training config must be a JSON object");
  for (const auto& item : j.items())
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
      throw Error(ErrorCode::InvalidConfig, "unknown config key '" + item.key() + "'");
  try {
    Stage stage = c.stage;
    if (j.contains("stage")) {
      const auto name = j.at("stage").get<std::string>();
      if (name == "pretrain") stage = Stage::Pretrain;
      else if (name == "finetune") stage = Stage::Finetune;
      else throw Error(ErrorCode::InvalidConfig, "unknown stage '" + name + "'");
    }
    c = stage == Stage::Pretrain ? pretrain_preset() : finetune_preset();
    if (j.contains("dataset_root")) c.dataset_root = j.at("dataset_root").get<std::string>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("input")) {
      const auto input = j.at("input").get<std::string>();
      if (input == "rgb") c.input = InputMode::Rgb;
      else if (input == "rgb_texture") c.input = InputMode::RgbTexture;
      else throw Error(ErrorCode::InvalidConfig, "unknown input mode '" + input + "'");
    }
    if (j.contains("spec")) {
      c.base_width = j.at("spec").value("base_width", c.base_width);
      c.depth = j.at("spec").value("depth", c.depth);
    }
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    if (j.contains("schedule")) from_json(j.at("schedule"), c.schedule);
    if (j.contains("optimizer")) from_json(j.at("optimizer"), c.optimizer);
    if (j.contains("augment")) c.augment = augment_from(j.at("augment"), c.augment);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      c.split.train = s.value("train", c.split.train);
      c.split.val = s.value("val", c.split.val);
      c.split.test = s.value("test", c.split.test);
    }
    c.seed = j.value("seed", c.seed);
    c.label_fraction = j.value("label_fraction", c.label_fraction);
    c.image_size = j.value("image_size", c.image_size);
    c.truth_dir = j.value("truth_dir", c.truth_dir);
    c.init_checkpoint_hash = j.value("init_checkpoint_hash", c.init_checkpoint_hash);
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.validate();
}

TrainConfig pretrain_preset() {
  TrainConfig c;
  c.stage = Stage::Pretrain;
  c.schedule = {10, 1e-3, 1.0, true};
  return c;
}

TrainConfig finetune_preset() {
  TrainConfig c;
  c.stage = Stage::Finetune;
  c.schedule = {10, 1e-4, 0.9, true};
  return c;
}

TrainConfig full_scale_pretrain_preset() {
  TrainConfig c = pretrain_preset();
  c.epochs = 300;
  c.batch_size = 26;
  c.depth = 4;
  c.base_width = 64;
  c.image_size = 0;
  c.schedule = {100, 1e-3, 1.0, true};
  return c;
}

TrainConfig full_scale_finetune_preset() {
  TrainConfig c = finetune_preset();
  c.epochs = 150;
  c.batch_size = 14;
  c.depth = 4;
  c.base_width = 64;
  c.image_size = 0;
  c.schedule = {50, 1e-4, 0.9, true};
  return c;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoFailure, "SHA-256 computation failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string config_hash(const TrainConfig& c) { return sha256_hex(hashed_fields(c).dump()); }

}  // namespace wrinkleforge
