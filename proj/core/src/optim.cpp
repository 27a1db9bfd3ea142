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

#include "wrinkleforge/optim.hpp"

#include <cmath>
#include <numbers>

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

void to_json(nlohmann::json& j, const AdamWConfig& c) {
  j = {{"beta1", c.beta1}, {"beta2", c.beta2}, {"eps", c.eps}, {"weight_decay", c.weight_decay}};
}

void from_json(const nlohmann::json& j, AdamWConfig& c) {
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.eps = j.value("eps", c.eps);
  c.weight_decay = j.value("weight_decay", c.weight_decay);
}

void adamw_step(std::span<const std::span<float>> params, std::span<const std::span<const float>> grads,
                AdamWState& state, double lr) {
  if (params.size() != grads.size())
    throw Error(ErrorCode::ShapeMismatch, "adamw: parameter and gradient lists differ");
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.size(), 0.0f);
      state.v.emplace_back(p.size(), 0.0f);
    }
  }
  if (state.m.size() != params.size() || state.v.size() != params.size())
    throw Error(ErrorCode::ShapeMismatch, "adamw: state does not match parameters");

  const auto& cfg = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k];
    auto g = grads[k];
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size())
      throw Error(ErrorCode::ShapeMismatch, "adamw: array size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * gi;
      const double vi = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      const double m_hat = mi / correction1;
      const double v_hat = vi / correction2;
      const double pi = p[i];
      p[i] = static_cast<float>(pi - lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) + cfg.weight_decay * pi));
    }
  }
}

void to_json(nlohmann::json& j, const SgdrSchedule& s) {
  j = {{"initial_period", s.initial_period},
       {"max_lr", s.max_lr},
       {"period_decay", s.period_decay},
       {"doubling", s.doubling}};
}

void from_json(const nlohmann::json& j, SgdrSchedule& s) {
  s.initial_period = j.value("initial_period", s.initial_period);
  s.max_lr = j.value("max_lr", s.max_lr);
  s.period_decay = j.value("period_decay", s.period_decay);
  s.doubling = j.value("doubling", s.doubling);
  if (s.initial_period < 1) throw Error(ErrorCode::InvalidConfig, "initial_period must be >= 1");
  if (s.max_lr < 0) throw Error(ErrorCode::InvalidConfig, "max_lr must be >= 0");
}

double sgdr_lr(const SgdrSchedule& schedule, std::int64_t epoch) {
  if (epoch < 0) epoch = 0;
  std::int64_t start = 0;
  std::int64_t length = schedule.initial_period;
  double peak = schedule.max_lr;
  while (epoch >= start + length) {
    start += length;
    if (schedule.doubling) length *= 2;
    peak *= schedule.period_decay;
  }
  const double t = static_cast<double>(epoch - start) / static_cast<double>(length);
  return peak * 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

}  // namespace wrinkleforge
