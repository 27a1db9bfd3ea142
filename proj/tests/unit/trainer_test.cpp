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

#include <fstream>

#include "fixtures.hpp"
#include "overfit.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/trainer.hpp"

using namespace wrinkleforge;

namespace {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Checkpoint two_class_head(float background_bias, float wrinkle_bias) {
  UNetSpec s;
  s.in_channels = 4;
  s.out_channels = 2;
  s.base_width = 2;
  s.depth = 1;
  s.head = HeadKind::Segmentation;
  Checkpoint c = UNet<float>(s).to_checkpoint();
  for (auto& p : c.parameters) {
    if (p.name == "head.weight") std::fill(p.values.begin(), p.values.end(), 0.0f);
    if (p.name == "head.bias") p.values = {background_bias, wrinkle_bias};
  }
  return c;
}

}  // namespace

TEST_CASE("pretraining writes a journal and is reproducible") {
  auto c = fixtures::tiny_config(Stage::Pretrain);
  const auto out = oracle::scratch_dir("trainer_pretrain");
  c.out_dir = out / "a";
  const auto a = pretrain(c);
  CHECK(a.journal.size() == 2);
  CHECK(a.journal[0].epoch == 1);
  CHECK(a.journal[0].lr == doctest::Approx(1e-3));
  CHECK_FALSE(a.journal[0].wall_ms.has_value());
  CHECK(a.checkpoint.spec.out_channels == 1);
  CHECK(a.checkpoint.config_hash == config_hash(c));
  CHECK(a.train_ids.size() == 16);
  for (const char* f : {"journal.jsonl", "checkpoint.wrnk", "config.json", "timing.jsonl"})
    CHECK(std::filesystem::exists(c.out_dir / f));
  const auto journal = read_text(c.out_dir / "journal.jsonl");
  CHECK(journal.find("\"wall_ms\":null") != std::string::npos);

  c.out_dir = out / "b";
  const auto b = pretrain(c);
  CHECK(b.journal == a.journal);
  CHECK(read_text(out / "a" / "journal.jsonl") == read_text(out / "b" / "journal.jsonl"));
  CHECK(oracle::read_bytes(out / "a" / "checkpoint.wrnk") == oracle::read_bytes(out / "b" / "checkpoint.wrnk"));
}

TEST_CASE("best checkpoint selection") {
  auto c = fixtures::tiny_config(Stage::Finetune);
  c.label_fraction = 0.5;
  const auto r = finetune(c);
  CHECK(r.train_ids.size() == 8);
  double best = r.initial_val_metric;
  int epoch = 0;
  for (const auto& e : r.journal)
    if (e.val_metric > best) {
      best = e.val_metric;
      epoch = e.epoch;
    }
  CHECK(r.best_epoch == epoch);
  CHECK(r.best_val_metric == best);
  CHECK(r.checkpoint.epoch == epoch);
  CHECK(r.checkpoint.spec.out_channels == 2);
  CHECK(r.checkpoint.optimizer_state.size() == (epoch == 0 ? 0u : 2 * r.checkpoint.parameters.size()));
}

TEST_CASE("finetuning from a pretrained checkpoint") {
  auto pc = fixtures::tiny_config(Stage::Pretrain);
  pc.epochs = 1;
  const auto pre = pretrain(pc);
  auto fc = fixtures::tiny_config(Stage::Finetune);
  fc.epochs = 1;
  const Checkpoint adapted = adapt_for_finetune(pre.checkpoint, fc);
  CHECK(adapted.spec.in_channels == 4);
  CHECK(adapted.spec.out_channels == 2);
  CHECK(adapted.optimizer_state.empty());
  CHECK(*adapted.find_parameter("enc0.conv2.weight") == *pre.checkpoint.find_parameter("enc0.conv2.weight"));
  const auto r = finetune(fc, pre.checkpoint);
  CHECK(r.checkpoint.spec.in_channels == 4);

  auto wrong = fc;
  wrong.base_width = 4;
  try {
    adapt_for_finetune(pre.checkpoint, wrong);
    FAIL("expected IncompatibleCheckpoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompatibleCheckpoint);
  }
}

TEST_CASE("prediction tie rule") {
  Rng rng(91);
  const Image img = oracle::random_image(rng, 8, 8, 3);
  const BinaryMask face(8, 8, 1);
  const TextureMap tex(8, 8);
  CHECK(predict(two_class_head(0.0f, 1.0f), img, face, tex).count() == 64);
  CHECK(predict(two_class_head(0.5f, 0.5f), img, face, tex).count() == 0);
  CHECK(predict(two_class_head(1.0f, 0.0f), img, face, tex).count() == 0);
}

TEST_CASE("prediction on an overfit sample") {
  const auto o = overfit::run();
  CHECK(o.final_loss < 0.05);
  const auto& s = o.sample;
  const BinaryMask pred = predict(o.checkpoint, s.image, s.face, TextureMap(32, 32));
  CHECK(evaluate(pred, s.truth).jsi > 0.3);
}

TEST_CASE("checkpoint evaluation") {
  auto c = fixtures::tiny_config(Stage::Finetune);
  c.epochs = 1;
  const auto r = finetune(c);
  const auto res = evaluate_checkpoint(r.checkpoint, c, r.split.test);
  CHECK(res.counts.total() == r.split.test.size() * 16 * 16);
}
