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

#include <filesystem>
#include <string>

#include "oracles.hpp"
#include "wrinkleforge/experiment.hpp"
#include "wrinkleforge/synth.hpp"

namespace fixtures {

/// A small synthetic corpus with weak labels, generated once per process.
inline const std::filesystem::path& tiny_corpus() {
  static const std::filesystem::path root = [] {
    auto dir = oracle::scratch_dir("tiny_corpus");
    wrinkleforge::SynthSpec spec;
    spec.count = 20;
    spec.size = 16;
    spec.seed = 5;
    wrinkleforge::generate(spec, dir, 2);
    wrinkleforge::ensure_weak_labels(dir);
    return dir;
  }();
  return root;
}

/// Smallest useful training setup on tiny_corpus().
inline wrinkleforge::TrainConfig tiny_config(wrinkleforge::Stage stage) {
  auto c = stage == wrinkleforge::Stage::Pretrain ? wrinkleforge::pretrain_preset() : wrinkleforge::finetune_preset();
  c.dataset_root = tiny_corpus();
  c.base_width = 2;
  c.depth = 1;
  c.epochs = 2;
  c.batch_size = 4;
  c.image_size = 16;
  c.seed = 3;
  c.schedule.initial_period = 2;
  return c;
}

}  // namespace fixtures
