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

#include <doctest.h>

#include "wrinkleforge/config.hpp"
#include "wrinkleforge/error.hpp"

using namespace wrinkleforge;

TEST_CASE("presets") {
  const auto pre = pretrain_preset();
  CHECK(pre.stage == Stage::Pretrain);
  CHECK(pre.input_channels() == 3);
  CHECK(pre.model_spec().out_channels == 1);
  CHECK(pre.model_spec().head == HeadKind::Regression);
  CHECK(pre.schedule.max_lr == 1e-3);
  CHECK(pre.optimizer.weight_decay == 0.05);

  auto fine = finetune_preset();
  CHECK(fine.model_spec().in_channels == 4);
  CHECK(fine.model_spec().out_channels == 2);
  fine.input = InputMode::Rgb;
  CHECK(fine.model_spec().in_channels == 3);

  CHECK(full_scale_pretrain_preset().schedule.initial_period == 100);
  CHECK(full_scale_finetune_preset().schedule.period_decay == 0.9);
}

TEST_CASE("json round trip") {
  TrainConfig c = finetune_preset();
  c.dataset_root = "data/root";
  c.seed = 99;
  c.label_fraction = 0.05;
  c.base_width = 8;
  c.augment.scale_p = 0.3;
  c.schedule.initial_period = 40;
  const nlohmann::json j = c;
  CHECK(j.at("spec").at("base_width") == 8);
  CHECK(j.get<TrainConfig>() == c);
}

TEST_CASE("partial json starts from the stage preset") {
  const auto c = nlohmann::json::parse(R"({"stage": "finetune", "schedule": {"max_lr": 0.002}})").get<TrainConfig>();
  CHECK(c.schedule.max_lr == 0.002);
  CHECK(c.schedule.period_decay == finetune_preset().schedule.period_decay);
  CHECK(c.schedule.initial_period == finetune_preset().schedule.initial_period);
}

TEST_CASE("invalid configs") {
  const auto code = [](const char* text) {
    try {
      nlohmann::json::parse(text).get<TrainConfig>();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::CorruptData;
  };
  CHECK(code(R"({"base_width": 8})") == ErrorCode::InvalidConfig);
  CHECK(code(R"({"stage": "warmup"})") == ErrorCode::InvalidConfig);
  CHECK(code(R"({"label_fraction": 0})") == ErrorCode::InvalidConfig);
  CHECK(code(R"({"batch_size": 0})") == ErrorCode::InvalidConfig);
  CHECK(code(R"({"split": {"train": 0.5}})") == ErrorCode::InvalidConfig);
  CHECK(code(R"({"image_size": 36})") == ErrorCode::InvalidConfig);
  CHECK(code(R"({"epochs": "many"})") == ErrorCode::InvalidConfig);
  CHECK(code(R"([1, 2])") == ErrorCode::InvalidConfig);
}

TEST_CASE("config hash") {
  TrainConfig a = pretrain_preset();
  TrainConfig b = a;
  b.dataset_root = "/elsewhere";
  b.out_dir = "/out";
  b.record_wall_time = true;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
