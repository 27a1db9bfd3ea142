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

#include <cmath>

#include "wrinkleforge/config.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/optim.hpp"

using namespace wrinkleforge;

namespace {

void step(std::vector<float>& p, const std::vector<float>& g, AdamWState& s, double lr) {
  std::vector<std::span<float>> ps{p};
  std::vector<std::span<const float>> gs{g};
  adamw_step(ps, gs, s, lr);
}

}  // namespace

TEST_CASE("adamw with zero gradients") {
  std::vector<float> p{1.0f, -2.0f, 0.5f};
  const std::vector<float> g(3, 0.0f);
  AdamWState plain;
  plain.config.weight_decay = 0.0;
  auto q = p;
  step(q, g, plain, 0.1);
  CHECK(q == p);

  AdamWState decay;
  step(q, g, decay, 0.1);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(q[i] == doctest::Approx(p[i] * 0.995).epsilon(1e-7));
  CHECK(decay.step == 1);
}

TEST_CASE("adamw scalar recurrence") {
  const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8, wd = 0.05, g = 0.3;
  double p = 1.5, m = 0.0, v = 0.0;
  std::vector<float> param{1.5f};
  AdamWState s;
  for (int t = 1; t <= 3; ++t) {
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t)), vh = v / (1 - std::pow(b2, t));
    p = p - lr * (mh / (std::sqrt(vh) + eps) + wd * p);
    step(param, {static_cast<float>(g)}, s, lr);
    CHECK(param[0] == doctest::Approx(p).epsilon(1e-6));
  }
  CHECK(s.m[0][0] == doctest::Approx(m).epsilon(1e-6));
  CHECK(s.v[0][0] == doctest::Approx(v).epsilon(1e-6));
}

TEST_CASE("adamw shape checks") {
  std::vector<float> p(3);
  AdamWState s;
  CHECK_THROWS_AS(step(p, std::vector<float>(2), s, 0.1), Error);
  step(p, std::vector<float>(3), s, 0.1);
  std::vector<float> other(4);
  CHECK_THROWS_AS(step(other, std::vector<float>(4), s, 0.1), Error);
}

TEST_CASE("sgdr schedule") {
  const auto pre = pretrain_preset().schedule;
  CHECK(sgdr_lr(pre, 0) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(sgdr_lr(pre, pre.initial_period / 2) == doctest::Approx(0.0005).epsilon(1e-12));

  const auto fine = full_scale_finetune_preset().schedule;
  CHECK(fine.initial_period == 50);
  CHECK(fine.period_decay == 0.9);
  CHECK(sgdr_lr(fine, 50) == doctest::Approx(0.9 * sgdr_lr(fine, 0)).epsilon(1e-12));
  CHECK(sgdr_lr(fine, 150) == doctest::Approx(0.81 * sgdr_lr(fine, 0)).epsilon(1e-12));

  SgdrSchedule s{4, 1.0, 0.5, true};
  std::int64_t start = 0, len = 4;
  double peak = 1.0;
  for (int period = 0; period < 4; ++period) {
    CHECK(sgdr_lr(s, start) == doctest::Approx(peak));
    for (std::int64_t e = start + 1; e < start + len; ++e) CHECK(sgdr_lr(s, e) <= sgdr_lr(s, e - 1));
    CHECK(sgdr_lr(s, start + len - 1) < 0.25 * peak);
    start += len;
    len *= 2;
    peak *= 0.5;
  }
  SgdrSchedule fixed{3, 1.0, 1.0, false};
  CHECK(sgdr_lr(fixed, 3) == 1.0);
  CHECK(sgdr_lr(fixed, 6) == 1.0);
}

TEST_CASE("optimizer json") {
  const AdamWConfig c{0.8, 0.99, 1e-6, 0.01};
  CHECK(nlohmann::json(c).get<AdamWConfig>() == c);
  const SgdrSchedule s{7, 0.01, 0.5, false};
  CHECK(nlohmann::json(s).get<SgdrSchedule>() == s);
}
