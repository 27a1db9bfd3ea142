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

#include <cstddef>
#include <span>
#include <vector>

namespace wrinkleforge {

/// Scalar objective plus its gradient with respect to the prediction.
template <typename Real>
struct LossValue {
  double value = 0.0;
  std::vector<Real> grad;
};

/// Mean squared error; grad_i = 2 (pred_i - target_i) / n.
template <typename Real>
LossValue<Real> mse(std::span<const Real> pred, std::span<const Real> target);

/// Soft Dice loss over an N x C row-major probability matrix:
///   1 - (1/C) sum_c (2 sum_i p_ic g_ic + smooth) / (sum_i p_ic + sum_i g_ic + smooth)
/// Rows of `probs` must sum to 1 (within 1e-5) and rows of `onehot` must be
/// exact one-hot vectors, otherwise NotNormalized.
template <typename Real>
LossValue<Real> soft_dice(std::span<const Real> probs, std::span<const Real> onehot,
                          std::size_t classes, double smooth = 1e-6);

/// Row-wise softmax with max subtraction. NonFiniteInput on NaN/inf logits.
template <typename Real>
std::vector<Real> softmax_rows(std::span<const Real> logits, std::size_t classes);

/// Backward of softmax_rows given its output and the upstream gradient:
/// dz_j = p_j (g_j - sum_k p_k g_k).
template <typename Real>
std::vector<Real> softmax_rows_backward(std::span<const Real> probs, std::span<const Real> grad,
                                        std::size_t classes);

}  // namespace wrinkleforge
