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
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrinkleforge/image.hpp"

namespace wrinkleforge {

struct FaceShape {
  double center_x = 0.5;  // fractions of the image side
  double center_y = 0.52;
  double radius_x = 0.36;
  double radius_y = 0.45;
  double jitter = 0.04;   // per-sample perturbation of all four values

  friend bool operator==(const FaceShape&, const FaceShape&) = default;
};

struct AnnotatorJitter {
  double dilate_p = 0.5;
  double drop_p = 0.15;
  int offset_px = 1;
  double min_jaccard = 0.25;
  double max_jaccard = 0.6;
  int max_attempts = 32;

  friend bool operator==(const AnnotatorJitter&, const AnnotatorJitter&) = default;
};

struct SynthSpec {
  int count = 100;
  int size = 64;
  int min_wrinkles = 2;
  int max_wrinkles = 6;
  double min_width = 1.0;  // stroke width in pixels
  double max_width = 2.0;
  double wrinkle_darkness = 0.35;
  double skin_noise = 0.02;
  int distractors = 3;       // faint non-wrinkle lines per image, at most
  double distractor_darkness = 0.12;
  FaceShape face;
  AnnotatorJitter annotators;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec.
  void validate() const;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

void to_json(nlohmann::json& j, const SynthSpec& s);
void from_json(const nlohmann::json& j, SynthSpec& s);

struct SynthSample {
  Image image;
  BinaryMask face;
  BinaryMask truth;
  std::vector<BinaryMask> annotations;  // a, b, c
  int wrinkles = 0;
  double min_pair_jaccard = 1.0;
  double max_pair_jaccard = 1.0;
};

/// Sample `index` of the corpus; depends only on (spec, index).
SynthSample generate_sample(const SynthSpec& spec, int index);

/// Zero-padded five-digit id.
std::string synth_id(int index);

/// Writes images/, face_masks/, truth/, annotations/{a,b,c}/ and
/// manifest.json under out_dir. Output bytes do not depend on `jobs`.
/// Returns the manifest.
nlohmann::json generate(const SynthSpec& spec, const std::filesystem::path& out_dir, unsigned jobs = 0);

struct Violation {
  std::string id;
  std::string file;
  std::string kind;  // missing, unreadable, not_binary, dimension_mismatch, truth_outside_face
  std::string detail;
};

struct CorpusReport {
  std::size_t images = 0;
  std::vector<Violation> violations;
};

nlohmann::json to_json(const CorpusReport& r);

/// Layout, binarity, size and truth-inside-face checks. Never throws for
/// violations; a missing images/ directory is itself reported.
CorpusReport validate_corpus(const std::filesystem::path& root);

}  // namespace wrinkleforge
