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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrinkleforge/image.hpp"

namespace wrinkleforge {

/// Masks from two or more annotators for one image, all the same shape.
class AnnotationSet {
 public:
  /// Throws InvalidAnnotationSet (fewer than 2 annotators, or ids and masks of
  /// different lengths) or ShapeMismatch.
  AnnotationSet(std::vector<std::string> annotator_ids, std::vector<BinaryMask> masks);

  std::size_t size() const noexcept { return masks_.size(); }
  const std::vector<std::string>& annotator_ids() const noexcept { return ids_; }
  const std::vector<BinaryMask>& masks() const noexcept { return masks_; }

 private:
  std::vector<std::string> ids_;
  std::vector<BinaryMask> masks_;
};

/// Pixel is 1 iff at least `threshold` annotators marked it.
BinaryMask majority_vote(const AnnotationSet& set, int threshold = 2);

/// |a and b| / |a or b|; 1.0 when both masks are empty.
double jaccard(const BinaryMask& a, const BinaryMask& b);

/// Sample Pearson correlation of the flattened masks. DegenerateInput when
/// either mask is constant.
double pearson(const BinaryMask& a, const BinaryMask& b);

struct PairAgreement {
  std::string first;
  std::string second;
  double jaccard = 0.0;
  double pearson = 0.0;
};

struct AgreementReport {
  std::vector<PairAgreement> pairs;  // lexicographic by (first, second)
  double mean_jaccard = 0.0;
  double mean_pearson = 0.0;
};

AgreementReport agreement(const AnnotationSet& set);

nlohmann::json to_json(const AgreementReport& report);

// Directory layout: <root>/<annotator_id>/<image_id>.png

/// Sorted annotator sub-directory names.
std::vector<std::string> list_annotators(const std::filesystem::path& root);
/// Image ids present for every annotator, sorted.
std::vector<std::string> list_annotated_images(const std::filesystem::path& root);
AnnotationSet load_annotation_set(const std::filesystem::path& root, const std::string& image_id);

/// Stacks every image vertically into one tall mask per annotator so a single
/// agreement report can cover the whole directory.
AnnotationSet pool_annotation_sets(const std::vector<AnnotationSet>& sets);

}  // namespace wrinkleforge
