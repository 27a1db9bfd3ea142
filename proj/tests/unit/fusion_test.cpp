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
#include "wrinkleforge/fusion.hpp"

using namespace wrinkleforge;

namespace {

AnnotationSet three(BinaryMask a, BinaryMask b, BinaryMask c) {
  return AnnotationSet({"a", "b", "c"}, {std::move(a), std::move(b), std::move(c)});
}

double pearson_oracle(const BinaryMask& a, const BinaryMask& b) {
  const double n = static_cast<double>(a.pixel_count());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    ma += a.values()[i];
    mb += b.values()[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const double da = a.values()[i] - ma, db = b.values()[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("majority vote counts") {
  const auto set = three(BinaryMask(1, 3, {1, 1, 0}), BinaryMask(1, 3, {0, 1, 1}), BinaryMask(1, 3, {0, 1, 0}));
  CHECK(majority_vote(set) == BinaryMask(1, 3, {0, 1, 0}));
  CHECK(majority_vote(set, 1) == BinaryMask(1, 3, {1, 1, 1}));
  CHECK(majority_vote(set, 3) == BinaryMask(1, 3, {0, 1, 0}));
  CHECK_THROWS_AS(majority_vote(set, 0), Error);
  CHECK_THROWS_AS(majority_vote(set, 4), Error);
}

TEST_CASE("majority vote agrees with brute force") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BinaryMask> masks;
    for (int i = 0; i < 3; ++i) masks.push_back(oracle::random_mask(rng, 6, 5));
    const auto set = three(masks[0], masks[1], masks[2]);
    for (int t = 1; t <= 3; ++t) CHECK(majority_vote(set, t) == oracle::vote(masks, t));
  }
}

TEST_CASE("annotation set validation") {
  CHECK_THROWS_AS(AnnotationSet({"a"}, {BinaryMask(2, 2)}), Error);
  CHECK_THROWS_AS(AnnotationSet({"a", "b"}, {BinaryMask(2, 2)}), Error);
  try {
    AnnotationSet({"a", "b"}, {BinaryMask(2, 2), BinaryMask(2, 3)});
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("jaccard") {
  const BinaryMask a(1, 4, {1, 1, 0, 0});
  CHECK(jaccard(a, a) == 1.0);
  CHECK(jaccard(a, BinaryMask(1, 4, {0, 0, 1, 1})) == 0.0);
  CHECK(jaccard(a, BinaryMask(1, 4, {0, 1, 1, 0})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(jaccard(BinaryMask(2, 2), BinaryMask(2, 2)) == 1.0);
}

TEST_CASE("pearson") {
  const BinaryMask a(1, 4, {1, 1, 0, 0});
  CHECK(pearson(a, a) == doctest::Approx(1.0));
  CHECK(pearson(a, BinaryMask(1, 4, {0, 0, 1, 1})) == doctest::Approx(-1.0));
  try {
    pearson(BinaryMask(1, 4), a);
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInput);
  }
}

TEST_CASE("agreement reports") {
  const BinaryMask m(2, 2, {1, 0, 0, 1});
  const auto same = agreement(three(m, m, m));
  CHECK(same.pairs.size() == 3);
  for (const auto& p : same.pairs) {
    CHECK(p.jaccard == doctest::Approx(1.0));
    CHECK(p.pearson == doctest::Approx(1.0));
  }
  CHECK(same.mean_jaccard == doctest::Approx(1.0));
  CHECK(same.mean_pearson == doctest::Approx(1.0));

  CHECK(agreement(AnnotationSet({"x", "y"}, {m, m})).pairs.size() == 1);

  const BinaryMask a(2, 2, {1, 1, 0, 0}), b(2, 2, {1, 0, 1, 0}), c(2, 2, {1, 1, 1, 0});
  const auto r = agreement(three(a, b, c));
  REQUIRE(r.pairs.size() == 3);
  const double jab = 1.0 / 3.0, jac = 2.0 / 3.0, jbc = 2.0 / 3.0;
  CHECK(r.pairs[0].first == "a");
  CHECK(r.pairs[0].second == "b");
  CHECK(r.pairs[0].jaccard == doctest::Approx(jab));
  CHECK(r.pairs[1].jaccard == doctest::Approx(jac));
  CHECK(r.pairs[2].jaccard == doctest::Approx(jbc));
  CHECK(r.pairs[0].pearson == doctest::Approx(pearson_oracle(a, b)));
  CHECK(r.pairs[0].pearson == doctest::Approx(0.0));
  CHECK(r.pairs[1].pearson == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(r.mean_jaccard == doctest::Approx((jab + jac + jbc) / 3.0));
  CHECK(r.mean_pearson == doctest::Approx((pearson_oracle(a, b) + pearson_oracle(a, c) + pearson_oracle(b, c)) / 3.0));
}

TEST_CASE("annotation directories") {
  const auto root = oracle::scratch_dir("fusion_dirs");
  Rng rng(23);
  for (const char* ann : {"b", "a", "c"}) {
    std::filesystem::create_directories(root / ann);
    for (const char* id : {"001", "002"}) save_mask(oracle::random_mask(rng, 4, 4), root / ann / (std::string(id) + ".png"));
  }
  save_mask(oracle::random_mask(rng, 4, 4), root / "a" / "003.png");
  CHECK(list_annotators(root) == std::vector<std::string>{"a", "b", "c"});
  CHECK(list_annotated_images(root) == std::vector<std::string>{"001", "002"});
  const auto s1 = load_annotation_set(root, "001");
  const auto s2 = load_annotation_set(root, "002");
  CHECK(s1.size() == 3);
  const auto pooled = pool_annotation_sets({s1, s2});
  CHECK(pooled.masks()[0].height() == 8);
  CHECK(pooled.masks()[1](5, 2) == s2.masks()[1](1, 2));
}
