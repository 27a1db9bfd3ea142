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

#include "wrinkleforge/config.hpp"
#include "wrinkleforge/image.hpp"

namespace wrinkleforge {

// Dataset layout under a root directory, all files <id>.png:
//   images/       RGB face images
//   face_masks/   binary face-region masks
//   weak_labels/  8-bit masked texture maps
//   truth/        fused wrinkle masks (directory name configurable)
namespace layout {
inline constexpr const char* kImages = "images";
inline constexpr const char* kFaceMasks = "face_masks";
inline constexpr const char* kWeakLabels = "weak_labels";
inline constexpr const char* kTruth = "truth";
inline constexpr const char* kAnnotations = "annotations";
inline constexpr const char* kSplits = "splits";
}  // namespace layout

/// One image with everything the two training stages may need.
struct DatasetSample {
  std::string id;
  Image rgb;          // 3 channels
  BinaryMask face;
  Image texture;      // weak label / 255, 1 channel; empty when not loaded
  BinaryMask truth;   // empty when not loaded

  /// Face-masked RGB, plus the texture channel for 4-channel models.
  Image network_input(int channels) const;
};

/// Ids of images/<id>.png, sorted. DatasetMissing if the directory is absent.
std::vector<std::string> dataset_ids(const std::filesystem::path& root);

struct LoadOptions {
  bool texture = true;
  bool truth = false;
  std::string truth_dir = layout::kTruth;
  int image_size = 0;  // resample to image_size x image_size when non-zero
};

/// DatasetMissing when a required file is absent.
std::vector<DatasetSample> load_samples(const std::filesystem::path& root, const std::vector<std::string>& ids,
                                        const LoadOptions& options);

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::uint64_t seed = 0;

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

void to_json(nlohmann::json& j, const SplitManifest& m);
void from_json(const nlohmann::json& j, SplitManifest& m);

/// Seeded shuffle of the sorted ids; sizes floor(train * n), floor(val * n)
/// and the remainder. TooFewSamples below 10 ids.
SplitManifest make_split(std::vector<std::string> ids, const TrainConfig& config);

/// Reuses <root>/splits/split_seed<seed>.json when it exists and covers the same
/// ids, otherwise creates and writes it.
SplitManifest load_or_create_split(const std::filesystem::path& root, const std::vector<std::string>& ids,
                                   const TrainConfig& config);

/// The round(fraction * n) ids (at least one) with the smallest seeded hash.
/// Returned in sorted order.
std::vector<std::string> subsample_ids(const std::vector<std::string>& ids, double fraction, std::uint64_t seed);

}  // namespace wrinkleforge
