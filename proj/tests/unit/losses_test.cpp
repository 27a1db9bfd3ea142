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
#include <limits>

#include "oracles.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/losses.hpp"

using namespace wrinkleforge;

namespace {

std::vector<double> random_probs(Rng& rng, std::size_t n, std::size_t c) {
  std::vector<double> p(n * c);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < c; ++k) total += p[i * c + k] = 0.05 + rng.uniform();
    for (std::size_t k = 0; k < c; ++k) p[i * c + k] /= total;
  }
  return p;
}

std::vector<double> random_onehot(Rng& rng, std::size_t n, std::size_t c) {
  std::vector<double> g(n * c, 0.0);
  for (std::size_t i = 0; i < n; ++i) g[i * c + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(c) - 1))] = 1.0;
  return g;
}

}  // namespace

TEST_CASE("mse values") {
  const std::vector<double> t{0.1, 0.2, 0.3, 0.4};
  const auto zero = mse<double>(t, t);
  CHECK(zero.value == 0.0);
  for (double g : zero.grad) CHECK(g == 0.0);
  std::vector<double> p = t;
  for (double& v : p) v += 0.25;
  CHECK(mse<double>(p, t).value == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK_THROWS_AS(mse<double>(std::vector<double>{1.0}, t), Error);
}

TEST_CASE("mse gradient matches central differences") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> p(4), t(4);
    for (auto& v : p) v = rng.uniform();
    for (auto& v : t) v = rng.uniform();
    const auto grad = mse<double>(p, t).grad;
    for (std::size_t i = 0; i < 4; ++i) {
      const double fd = oracle::central_difference([&] { return mse<double>(p, t).value; }, p[i], 1e-6);
      CHECK(oracle::relative_error(grad[i], fd) < 1e-6);
    }
  }
}

TEST_CASE("soft dice values") {
  const std::vector<double> g{1, 0, 1, 0, 0, 1, 0, 1};
  CHECK(soft_dice<double>(g, g, 2).value < 1e-9);
  const std::vector<double> uniform(8, 0.5);
  CHECK(soft_dice<double>(uniform, g, 2, 0.0).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(soft_dice<double>(uniform, g, 2).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("soft dice input validation") {
  const std::vector<double> g{1, 0, 0, 1};
  const auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidSpec;
  };
  CHECK(code([&] { soft_dice<double>(std::vector<double>{0.7, 0.7, 0.5, 0.5}, g, 2); }) == ErrorCode::NotNormalized);
  CHECK(code([&] { soft_dice<double>(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<double>{0.5, 0.5, 0, 1}, 2); }) ==
        ErrorCode::NotNormalized);
  CHECK(code([&] { soft_dice<double>(std::vector<double>{1.0, 0.0}, g, 2); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("soft dice gradient matches central differences") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 6, c = 3;
    auto p = random_probs(rng, n, c);
    const auto g = random_onehot(rng, n, c);
    const auto grad = soft_dice<double>(p, g, c).grad;
    // Same expression without the simplex check.
    const auto raw = [&] {
      double total = 0.0;
      for (std::size_t k = 0; k < c; ++k) {
        double inter = 0, ps = 0, gs = 0;
        for (std::size_t i = 0; i < n; ++i) {
          inter += p[i * c + k] * g[i * c + k];
          ps += p[i * c + k];
          gs += g[i * c + k];
        }
        total += (2 * inter + 1e-6) / (ps + gs + 1e-6);
      }
      return 1.0 - total / static_cast<double>(c);
    };
    CHECK(raw() == doctest::Approx(soft_dice<double>(p, g, c).value).epsilon(1e-14));
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double fd = oracle::central_difference(raw, p[i], 1e-5);
      CHECK(oracle::relative_error(grad[i], fd) < 1e-4);
    }
  }
}

TEST_CASE("softmax rows") {
  const auto half = softmax_rows<double>(std::vector<double>{0.0, 0.0}, 2);
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);
  const auto big = softmax_rows<double>(std::vector<double>{1.0, 1001.0}, 2);
  CHECK(std::isfinite(big[0]));
  CHECK(big[0] == doctest::Approx(0.0));
  CHECK(big[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(softmax_rows<double>(std::vector<double>{std::numeric_limits<double>::quiet_NaN(), 0.0}, 2), Error);
  CHECK_THROWS_AS(softmax_rows<double>(std::vector<double>{std::numeric_limits<double>::infinity(), 0.0}, 2), Error);
}

TEST_CASE("softmax backward matches central differences") {
  Rng rng(47);
  std::vector<double> z(12), up(12);
  for (auto& v : z) v = rng.normal();
  for (auto& v : up) v = rng.normal();
  const auto objective = [&] {
    const auto p = softmax_rows<double>(z, 3);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * up[i];
    return s;
  };
  const auto dz = softmax_rows_backward<double>(softmax_rows<double>(z, 3), up, 3);
  for (std::size_t i = 0; i < z.size(); ++i)
    CHECK(oracle::relative_error(dz[i], oracle::central_difference(objective, z[i], 1e-6)) < 1e-6);
}
