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

#include <cstring>
#include <fstream>

#include "oracles.hpp"
#include "wrinkleforge/checkpoint.hpp"
#include "wrinkleforge/error.hpp"

using namespace wrinkleforge;

namespace {

Checkpoint sample_checkpoint(int in = 3, int out = 1) {
  UNetSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.base_width = 4;
  s.depth = 2;
  s.seed = 31;
  s.head = out == 1 ? HeadKind::Regression : HeadKind::Segmentation;
  Checkpoint c = UNet<float>(s).to_checkpoint();
  c.epoch = 7;
  c.optimizer_step = 42;
  c.config_hash = "abc123";
  c.optimizer_state.push_back({"adamw.m/head.bias", {1}, {0.25f}});
  return c;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST_CASE("serialization round trip") {
  const auto dir = oracle::scratch_dir("checkpoint_io");
  const Checkpoint c = sample_checkpoint();
  save_checkpoint(c, dir / "a.wrnk");
  const Checkpoint back = load_checkpoint(dir / "a.wrnk");
  CHECK(back == c);
  save_checkpoint(back, dir / "b.wrnk");
  CHECK(oracle::read_bytes(dir / "a.wrnk") == oracle::read_bytes(dir / "b.wrnk"));
  const auto bytes = serialize_checkpoint(c);
  REQUIRE(bytes.size() > 5);
  CHECK(std::memcmp(bytes.data(), "WRNK1", 5) == 0);
  CHECK(deserialize_checkpoint(bytes) == c);
}

TEST_CASE("corrupt and mismatched files") {
  const auto dir = oracle::scratch_dir("checkpoint_bad");
  const Checkpoint c = sample_checkpoint();
  auto bytes = serialize_checkpoint(c);
  bytes.resize(bytes.size() - 10);
  std::ofstream(dir / "cut.wrnk", std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  CHECK(code_of([&] { load_checkpoint(dir / "cut.wrnk"); }) == ErrorCode::CorruptCheckpoint);
  std::ofstream(dir / "junk.wrnk") << "WRNK1 garbage";
  CHECK(code_of([&] { load_checkpoint(dir / "junk.wrnk"); }) == ErrorCode::CorruptCheckpoint);
  CHECK(code_of([&] { load_checkpoint(dir / "absent.wrnk"); }) == ErrorCode::MissingFile);

  save_checkpoint(c, dir / "ok.wrnk");
  CHECK(code_of([&] { load_checkpoint(dir / "ok.wrnk", std::string("other")); }) == ErrorCode::HashMismatch);
  CHECK(load_checkpoint(dir / "ok.wrnk", std::string("other"), true) == c);
  CHECK(load_checkpoint(dir / "ok.wrnk", std::string("abc123")) == c);
}

TEST_CASE("inventory checks") {
  Checkpoint c = sample_checkpoint();
  c.parameters.pop_back();
  CHECK(code_of([&] { check_inventory(c); }) == ErrorCode::IncompatibleCheckpoint);
  c = sample_checkpoint();
  c.parameters[0].shape[1] = 5;
  CHECK(code_of([&] { UNet<float>{c}; }) == ErrorCode::IncompatibleCheckpoint);
}

TEST_CASE("input channel expansion keeps the function of the original channels") {
  const Checkpoint c = sample_checkpoint(3, 2);
  const Checkpoint wide = expand_input_channels(c, 4);
  CHECK(wide.spec.in_channels == 4);
  CHECK(wide.find_parameter("enc0.conv1.weight")->shape == std::vector<int>{8 / 2, 4, 3, 3});
  UNet<float> a(c), b(wide);
  Rng rng(71);
  for (int trial = 0; trial < 3; ++trial) {
    Tensor4 x3(1, 3, 8, 8), x4(1, 4, 8, 8);
    for (int ch = 0; ch < 4; ++ch)
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          const auto v = static_cast<float>(rng.uniform());
          x4.at(0, ch, y, x) = v;
          if (ch < 3) x3.at(0, ch, y, x) = v;
        }
    const auto ya = a.forward(x3), yb = b.forward(x4);
    for (std::size_t i = 0; i < ya.size(); ++i) CHECK(std::abs(ya.values()[i] - yb.values()[i]) <= 1e-7);
  }
  CHECK(code_of([&] { expand_input_channels(c, 3); }) == ErrorCode::ShrinkNotSupported);
  CHECK(code_of([&] { expand_input_channels(c, 2); }) == ErrorCode::ShrinkNotSupported);
}

TEST_CASE("head replacement") {
  const Checkpoint c = sample_checkpoint();
  const Checkpoint two = replace_head(c, 2, 5);
  CHECK(two.spec.out_channels == 2);
  CHECK(two.spec.head == HeadKind::Segmentation);
  CHECK(two.optimizer_state.empty());
  for (std::size_t i = 0; i + 2 < c.parameters.size(); ++i) CHECK(two.parameters[i] == c.parameters[i]);
  CHECK(replace_head(c, 2, 5) == two);
  CHECK(replace_head(c, 2, 6).find_parameter("head.weight")->values != two.find_parameter("head.weight")->values);

  const Checkpoint redrawn = replace_head(c, 1, c.spec.seed);
  CHECK(redrawn.find_parameter("head.weight")->values != c.find_parameter("head.weight")->values);
  CHECK(redrawn.spec.head == HeadKind::Regression);
}
