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

#include "oracles.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/texture.hpp"

using namespace wrinkleforge;

TEST_CASE("gaussian kernel construction") {
  SUBCASE("size 1 is a unit impulse") {
    const auto k = make_gaussian(1, 3.0);
    REQUIRE(k.weights().size() == 1);
    CHECK(k.weights()[0] == 1.0);
  }
  SUBCASE("size 3 sigma 1 is normalized and four-fold symmetric") {
    const auto k = make_gaussian(3, 1.0);
    double total = 0.0;
    for (double w : k.weights()) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    const double sum = 1.0 + 4.0 * std::exp(-0.5) + 4.0 * std::exp(-1.0);
    CHECK(k.weight(0, 0) == doctest::Approx(1.0 / sum).epsilon(1e-15));
    CHECK(k.weight(-1, 0) == k.weight(1, 0));
    CHECK(k.weight(0, -1) == k.weight(0, 1));
    CHECK(k.weight(-1, 0) == k.weight(0, 1));
    CHECK(k.weight(-1, -1) == k.weight(1, 1));
  }
  SUBCASE("21x21 sigma 5 equals the outer product of its factor") {
    const auto k = make_gaussian(21, 5.0);
    const auto dense = oracle::gaussian_weights(21, 5.0);
    const auto f = k.factor();
    for (int i = 0; i < 21; ++i)
      for (int j = 0; j < 21; ++j) {
        const auto idx = static_cast<std::size_t>(i * 21 + j);
        CHECK(std::abs(f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(j)] - k.weights()[idx]) < 1e-12);
        CHECK(std::abs(dense[idx] - k.weights()[idx]) < 1e-15);
      }
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(make_gaussian(4, 1.0), Error);
    CHECK_THROWS_AS(make_gaussian(3, 0.0), Error);
    CHECK_THROWS_AS(make_gaussian(0, 1.0), Error);
  }
  CHECK(default_texture_kernel().size() == 21);
  CHECK(default_texture_kernel().sigma() == 5.0);
}

TEST_CASE("reflect-101 indexing") {
  for (int n : {1, 2, 5, 9})
    for (int i = -3 * n; i < 4 * n; ++i) CHECK(reflect101(i, n) == oracle::mirror(i, n));
  CHECK(reflect101(-1, 5) == 1);
  CHECK(reflect101(5, 5) == 3);
}

TEST_CASE("blur of a constant image is constant") {
  Image img(9, 11, 1);
  for (auto& v : img.values()) v = 0.37;
  const Image out = gaussian_blur(img, make_gaussian(5, 2.0));
  for (double v : out.values()) CHECK(v == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("blur of a centered impulse reproduces the kernel") {
  const auto k = make_gaussian(5, 1.5);
  Image img(15, 15, 1);
  img(7, 7) = 1.0;
  const Image out = gaussian_blur(img, k);
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -2; dx <= 2; ++dx) CHECK(std::abs(out(7 + dy, 7 + dx) - k.weight(dy, dx)) < 1e-15);
  CHECK(out(0, 0) == 0.0);
}

TEST_CASE("separable blur matches dense convolution") {
  Rng rng(11);
  const auto k = make_gaussian(5, 2.0);
  const auto dense = oracle::gaussian_weights(5, 2.0);
  const Image img = oracle::random_image(rng, 16, 16, 1);
  const Image fast = gaussian_blur(img, k);
  const Image slow = oracle::dense_blur(img, dense, 5);
  for (std::size_t i = 0; i < fast.values().size(); ++i) CHECK(std::abs(fast.values()[i] - slow.values()[i]) < 1e-10);
  CHECK_THROWS_AS(gaussian_blur(Image(4, 4, 3), k), Error);
}

TEST_CASE("texture map closed forms") {
  const auto k = default_texture_kernel();
  Image black(12, 12, 1);
  const TextureMap tb = texture_map(black, k);
  for (double v : tb.values()) CHECK(std::abs(v - 255.0) < 1e-9);
  Image white(12, 12, 1);
  for (auto& v : white.values()) v = 1.0;
  const double expected = (1.0 - 255.0 / 256.0) * 255.0;
  const TextureMap tw = texture_map(white, k);
  for (double v : tw.values()) CHECK(std::abs(v - expected) < 1e-9);
}

TEST_CASE("a dark dip scores higher than the bright field") {
  const auto k = default_texture_kernel();
  Image img(25, 25, 1);
  for (auto& v : img.values()) v = 200.0 / 255.0;
  img(12, 12) = 50.0 / 255.0;
  const TextureMap t = texture_map(img, k);
  const Image blurred = oracle::dense_blur(img, oracle::gaussian_weights(21, 5.0), 21);
  CHECK(t(12, 12) > t(0, 0));
  CHECK(t(12, 12) > t(12, 14));
  for (int y = 0; y < 25; y += 6)
    for (int x = 0; x < 25; x += 6)
      CHECK(std::abs(t(y, x) - oracle::texture_value(img(y, x) * 255.0, blurred(y, x) * 255.0)) < 1e-9);
}

TEST_CASE("weak labels") {
  const auto k = default_texture_kernel();
  Rng rng(13);
  const Image rgb = oracle::random_image(rng, 10, 10, 3);
  const TextureMap blank = weak_label(rgb, BinaryMask(10, 10, 0), k);
  for (double v : blank.values()) CHECK(v == 0.0);
  CHECK(weak_label(rgb, BinaryMask(10, 10, 1), k).values()[17] == texture_map(to_grayscale(rgb), k).values()[17]);

  Image white(10, 10, 3);
  for (auto& v : white.values()) v = 1.0;
  BinaryMask half(10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 5; ++x) half(y, x) = 1;
  const TextureMap t = weak_label(white, half, k);
  const double expected = (1.0 - 255.0 / 256.0) * 255.0;
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) CHECK(std::abs(t(y, x) - (x < 5 ? expected : 0.0)) < 1e-9);
}

TEST_CASE("texture persistence and normalization") {
  const auto dir = oracle::scratch_dir("texture_io");
  TextureMap t(3, 3);
  for (int i = 0; i < 9; ++i) t.values()[static_cast<std::size_t>(i)] = i * 30.0;
  save_texture(t, dir / "t.png");
  const TextureMap back = load_texture(dir / "t.png");
  for (int i = 0; i < 9; ++i) CHECK(back.values()[static_cast<std::size_t>(i)] == doctest::Approx(i * 30.0));
  const TextureMap round = TextureMap::from_normalized(t.normalized());
  for (int i = 0; i < 9; ++i) CHECK(round.values()[static_cast<std::size_t>(i)] == doctest::Approx(i * 30.0));
}

TEST_CASE("batch weak-label generation") {
  const auto root = oracle::scratch_dir("texture_batch");
  const auto src = root / "images", masks = root / "masks";
  std::filesystem::create_directories(src);
  std::filesystem::create_directories(masks);
  const auto k = make_gaussian(5, 2.0);

  SUBCASE("empty source") {
    const auto report = batch_weak_labels(src, masks, root / "out", k, 2);
    CHECK(report.processed == 0);
    CHECK(report.failed.empty());
  }
  SUBCASE("valid pairs, a missing mask and reruns") {
    Rng rng(17);
    for (const char* id : {"a", "b", "c"}) {
      save_png(oracle::random_image(rng, 12, 12, 3), src / (std::string(id) + ".png"));
      save_mask(oracle::random_mask(rng, 12, 12), masks / (std::string(id) + ".png"));
    }
    auto report = batch_weak_labels(src, masks, root / "out1", k, 1);
    CHECK(report.processed == 3);
    CHECK(report.failed.empty());
    report = batch_weak_labels(src, masks, root / "out2", k, 3);
    for (const char* id : {"a", "b", "c"})
      CHECK(oracle::read_bytes(root / "out1" / (std::string(id) + ".png")) ==
            oracle::read_bytes(root / "out2" / (std::string(id) + ".png")));

    std::filesystem::remove(masks / "b.png");
    report = batch_weak_labels(src, masks, root / "out3", k, 2);
    CHECK(report.processed == 2);
    REQUIRE(report.failed.size() == 1);
    CHECK(report.failed[0].id == "b");
  }
}
