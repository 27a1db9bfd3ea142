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

#include "wrinkleforge/metrics.hpp"

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth) {
  if (!pred.same_shape(truth))
    throw Error(ErrorCode::ShapeMismatch, "prediction and truth sizes differ");
  ConfusionCounts c;
  auto p = pred.values();
  auto t = truth.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      if (t[i]) ++c.tp;
      else ++c.fp;
    } else {
      if (t[i]) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

EvalResult metrics_from_counts(const ConfusionCounts& c) {
  EvalResult r;
  r.counts = c;
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  const auto total = static_cast<double>(c.total());

  r.precision = (c.tp + c.fp) > 0 ? tp / (tp + fp) : 0.0;
  r.recall = (c.tp + c.fn) > 0 ? tp / (tp + fn) : 0.0;
  if (c.tp + c.fp + c.fn == 0) {
    r.jsi = 1.0;
    r.f1 = 1.0;
  } else {
    r.jsi = tp / (tp + fp + fn);
    const double pr = r.precision + r.recall;
    r.f1 = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
  }
  r.accuracy = total > 0 ? (tp + static_cast<double>(c.tn)) / total : 0.0;
  return r;
}

EvalResult evaluate(const BinaryMask& pred, const BinaryMask& truth) {
  return metrics_from_counts(confusion(pred, truth));
}

EvalResult evaluate_dataset(const std::vector<std::pair<BinaryMask, BinaryMask>>& pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyDataset, "no prediction/truth pairs");
  ConfusionCounts total;
  for (const auto& [pred, truth] : pairs) total += confusion(pred, truth);
  return metrics_from_counts(total);
}

nlohmann::json to_json(const EvalResult& r) {
  return {{"jsi", r.jsi},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"accuracy", r.accuracy},
          {"counts", {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}, {"tn", r.counts.tn}}}};
}

}  // namespace wrinkleforge
