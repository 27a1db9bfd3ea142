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

#include "oracles.hpp"
#include "wrinkleforge/error.hpp"
#include "wrinkleforge/fusion.hpp"
#include "wrinkleforge/synth.hpp"

using namespace wrinkleforge;
namespace fs = std::filesystem;

namespace {

SynthSpec small(int count) {
  SynthSpec s;
  s.count = count;
  s.size = 24;
  s.seed = 8;
  return s;
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a));
  std::size_t others = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) others += e.is_regular_file() ? 1 : 0;
  if (others != files.size()) return false;
  for (const auto& f : files)
    if (oracle::read_bytes(a / f) != oracle::read_bytes(b / f)) return false;
  return true;
}

}  // namespace

TEST_CASE("spec validation and json") {
  SynthSpec s = small(3);
  CHECK_NOTHROW(s.validate());
  s.min_wrinkles = 5;
  s.max_wrinkles = 2;
  CHECK_THROWS_AS(s.validate(), Error);
  s = small(3);
  s.size = 4;
  CHECK_THROWS_AS(s.validate(), Error);
  s = small(-1);
  CHECK_THROWS_AS(s.validate(), Error);
  s = small(3);
  s.annotators.min_jaccard = 0.3;
  const nlohmann::json j = s;
  CHECK(j.contains("wrinkle_count_range"));
  CHECK(j.get<SynthSpec>() == s);
}

TEST_CASE("samples") {
  const SynthSpec spec = small(1);
  const auto a = generate_sample(spec, 3);
  const auto b = generate_sample(spec, 3);
  CHECK(a.image == b.image);
  CHECK(a.truth == b.truth);
  CHECK(a.annotations.size() == 3);
  CHECK(a.truth.count() > 0);
  for (std::size_t i = 0; i < a.truth.pixel_count(); ++i)
    if (a.truth.values()[i]) CHECK(a.face.values()[i] == 1);
  CHECK(generate_sample(spec, 4).image != a.image);
  CHECK(synth_id(7) == "00007");
}

TEST_CASE("zero wrinkles give empty truth on a textured image") {
  SynthSpec spec = small(1);
  spec.min_wrinkles = 0;
  spec.max_wrinkles = 0;
  const auto s = generate_sample(spec, 0);
  CHECK(s.truth.count() == 0);
  const auto [lo, hi] = std::minmax_element(s.image.values().begin(), s.image.values().end());
  CHECK(*hi - *lo > 0.05);
}

TEST_CASE("corpus generation") {
  const auto root = oracle::scratch_dir("synth_corpus");
  SUBCASE("empty corpus") {
    const auto manifest = generate(small(0), root / "empty", 1);
    CHECK(manifest.at("samples").empty());
  }
  SUBCASE("bytes do not depend on the seed run or the job count") {
    const auto manifest = generate(small(6), root / "one", 1);
    generate(small(6), root / "four", 4);
    CHECK(manifest.at("samples").size() == 6);
    CHECK(same_tree(root / "one", root / "four"));
    for (const char* dir : {"images", "face_masks", "truth", "annotations/a", "annotations/c"})
      CHECK(fs::exists(root / "one" / dir / "00005.png"));
    CHECK(fs::exists(root / "one" / "manifest.json"));
    CHECK(load_annotation_set(root / "one" / "annotations", "00002").size() == 3);
  }
}

TEST_CASE("corpus validation") {
  const auto root = oracle::scratch_dir("synth_validate");
  generate(small(4), root, 2);
  CHECK(validate_corpus(root).violations.empty());
  CHECK(validate_corpus(root).images == 4);

  save_png(Image(24, 24, 1, std::vector<double>(576, 0.5)), root / "truth" / "00001.png");
  fs::remove(root / "face_masks" / "00002.png");
  const auto report = validate_corpus(root);
  bool gray = false, missing = false;
  for (const auto& v : report.violations) {
    gray = gray || (v.id == "00001" && v.kind == "not_binary");
    missing = missing || (v.id == "00002" && v.kind == "missing");
  }
  CHECK(gray);
  CHECK(missing);
  CHECK(to_json(report).at("violations").size() == report.violations.size());

  CHECK_FALSE(validate_corpus(root / "absent").violations.empty());
}
