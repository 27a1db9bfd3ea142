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
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace wrinkleforge {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.05;

  friend bool operator==(const AdamWConfig&, const AdamWConfig&) = default;
};

void to_json(nlohmann::json& j, const AdamWConfig& c);
void from_json(const nlohmann::json& j, AdamWConfig& c);

struct AdamWState {
  AdamWConfig config;
  std::uint64_t step = 0;
  std::vector<std::vector<float>> m;  // one entry per parameter array
  std::vector<std::vector<float>> v;
};

/// One AdamW update with bias-corrected moments and decoupled weight decay:
///   p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)
/// Moment buffers are allocated on first use. ShapeMismatch when params,
/// grads and state disagree.
void adamw_step(std::span<const std::span<float>> params, std::span<const std::span<const float>> grads,
                AdamWState& state, double lr);

/// Cosine annealing with warm restarts. Period k lasts
/// initial_period * (doubling ? 2^k : 1) epochs and peaks at
/// max_lr * period_decay^k.
struct SgdrSchedule {
  int initial_period = 10;
  double max_lr = 1e-3;
  double period_decay = 1.0;
  bool doubling = true;

  friend bool operator==(const SgdrSchedule&, const SgdrSchedule&) = default;
};

void to_json(nlohmann::json& j, const SgdrSchedule& s);
void from_json(const nlohmann::json& j, SgdrSchedule& s);

double sgdr_lr(const SgdrSchedule& schedule, std::int64_t epoch);

}  // namespace wrinkleforge
