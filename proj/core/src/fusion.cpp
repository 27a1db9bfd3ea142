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

#include "wrinkleforge/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wrinkleforge/error.hpp"
#include "wrinkleforge/texture.hpp"

namespace wrinkleforge {

AnnotationSet::AnnotationSet(std::vector<std::string> annotator_ids, std::vector<BinaryMask> masks)
    : ids_(std::move(annotator_ids)), masks_(std::move(masks)) {
  if (ids_.size() != masks_.size())
    throw Error(ErrorCode::InvalidAnnotationSet, "annotator ids and masks differ in count");
  if (masks_.size() < 2)
    throw Error(ErrorCode::InvalidAnnotationSet, "need at least two annotators");
  for (const auto& m : masks_)
    if (!m.same_shape(masks_.front()))
      throw Error(ErrorCode::ShapeMismatch, "annotator masks differ in size");
}

BinaryMask majority_vote(const AnnotationSet& set, int threshold) {
  if (threshold < 1 || threshold > static_cast<int>(set.size()))
    throw Error(ErrorCode::InvalidThreshold,
                "threshold must lie in [1, " + std::to_string(set.size()) + "]");
  const auto& first = set.masks().front();
  std::vector<int> votes(first.pixel_count(), 0);
  for (const auto& m : set.masks()) {
    auto v = m.values();
    for (std::size_t i = 0; i < votes.size(); ++i) votes[i] += v[i];
  }
  BinaryMask out(first.height(), first.width());
  auto dst = out.values();
  for (std::size_t i = 0; i < votes.size(); ++i) dst[i] = votes[i] >= threshold ? 1 : 0;
  return out;
}

double jaccard(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "jaccard: mask sizes differ");
  std::size_t inter = 0;
  std::size_t uni = 0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    inter += va[i] & vb[i];
    uni += va[i] | vb[i];
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double pearson(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "pearson: mask sizes differ");
  const double n = static_cast<double>(a.pixel_count());
  auto va = a.values();
  auto vb = b.values();
  double sa = 0, sb = 0, sab = 0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    sa += va[i];
    sb += vb[i];
    sab += va[i] & vb[i];
  }
  // for {0,1} data sum(x^2) == sum(x)
  const double cov = sab - sa * sb / n;
  const double var_a = sa - sa * sa / n;
  const double var_b = sb - sb * sb / n;
  if (sa == 0 || sa == n || sb == 0 || sb == n)
    throw Error(ErrorCode::DegenerateInput, "pearson is undefined for a constant mask");
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

AgreementReport agreement(const AnnotationSet& set) {
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return set.annotator_ids()[x] < set.annotator_ids()[y];
  });

  AgreementReport report;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& a = set.masks()[order[i]];
      const auto& b = set.masks()[order[j]];
      PairAgreement pair{set.annotator_ids()[order[i]], set.annotator_ids()[order[j]], 0.0, 0.0};
      pair.jaccard = jaccard(a, b);
      try {
        pair.pearson = pearson(a, b);
      } catch (const Error& e) {
        throw Error(e.code(), "pair (" + pair.first + ", " + pair.second + "): " + e.what());
      }
      report.pairs.push_back(pair);
    }
  }
  for (const auto& p : report.pairs) {
    report.mean_jaccard += p.jaccard;
    report.mean_pearson += p.pearson;
  }
  const double n = static_cast<double>(report.pairs.size());
  report.mean_jaccard /= n;
  report.mean_pearson /= n;
  return report;
}

nlohmann::json to_json(const AgreementReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs)
    pairs.push_back({{"a", p.first}, {"b", p.second}, {"jaccard", p.jaccard}, {"pearson", p.pearson}});
  return {{"pairs", pairs},
          {"averages", {{"jaccard", report.mean_jaccard}, {"pearson", report.mean_pearson}}}};
}

std::vector<std::string> list_annotators(const std::filesystem::path& root) {
  std::vector<std::string> ids;
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec))
    throw Error(ErrorCode::DatasetMissing, "annotation directory not found: " + root.string());
  for (const auto& entry : std::filesystem::directory_iterator(root))
    if (entry.is_directory()) ids.push_back(entry.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> list_annotated_images(const std::filesystem::path& root) {
  const auto annotators = list_annotators(root);
  if (annotators.empty()) return {};
  std::vector<std::string> common = list_png_ids(root / annotators.front());
  for (std::size_t k = 1; k < annotators.size(); ++k) {
    const auto ids = list_png_ids(root / annotators[k]);
    std::vector<std::string> next;
    std::set_intersection(common.begin(), common.end(), ids.begin(), ids.end(), std::back_inserter(next));
    common = std::move(next);
  }
  return common;
}

AnnotationSet load_annotation_set(const std::filesystem::path& root, const std::string& image_id) {
  auto annotators = list_annotators(root);
  std::vector<BinaryMask> masks;
  masks.reserve(annotators.size());
  for (const auto& a : annotators) masks.push_back(load_mask(root / a / (image_id + ".png")));
  return AnnotationSet(std::move(annotators), std::move(masks));
}

AnnotationSet pool_annotation_sets(const std::vector<AnnotationSet>& sets) {
  if (sets.empty()) throw Error(ErrorCode::EmptyDataset, "no annotation sets to pool");
  const auto& ids = sets.front().annotator_ids();
  const int width = sets.front().masks().front().width();
  int total_height = 0;
  for (const auto& s : sets) {
    if (s.annotator_ids() != ids)
      throw Error(ErrorCode::InvalidAnnotationSet, "annotator ids differ between images");
    if (s.masks().front().width() != width)
      throw Error(ErrorCode::ShapeMismatch, "pooled masks must share a width");
    total_height += s.masks().front().height();
  }
  std::vector<BinaryMask> pooled;
  for (std::size_t a = 0; a < ids.size(); ++a) {
    std::vector<std::uint8_t> data;
    data.reserve(static_cast<std::size_t>(total_height) * static_cast<std::size_t>(width));
    for (const auto& s : sets) {
      auto v = s.masks()[a].values();
      data.insert(data.end(), v.begin(), v.end());
    }
    pooled.emplace_back(total_height, width, std::move(data));
  }
  return AnnotationSet(ids, std::move(pooled));
}

}  // namespace wrinkleforge
