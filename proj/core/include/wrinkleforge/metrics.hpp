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
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrinkleforge/image.hpp"

namespace wrinkleforge {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Zero-denominator rules: precision, recall, f1 and jsi are 0 when their
// denominator vanishes, except that an empty prediction against an empty
// truth scores jsi = f1 = 1.
struct EvalResult {
  double jsi = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  ConfusionCounts counts;
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth);

EvalResult metrics_from_counts(const ConfusionCounts& counts);

EvalResult evaluate(const BinaryMask& pred, const BinaryMask& truth);

/// Micro average: counts are summed over all pairs before computing ratios.
/// Throws EmptyDataset for an empty list.
EvalResult evaluate_dataset(const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs);

nlohmann::json to_json(const EvalResult& result);

}  // namespace wrinkleforge
