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

#include "wrinkleforge/losses.hpp"

#include <algorithm>
#include <cmath>

#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

template <typename Real>
LossValue<Real> mse(std::span<const Real> pred, std::span<const Real> target) {
  if (pred.size() != target.size() || pred.empty())
    throw Error(ErrorCode::ShapeMismatch, "mse: prediction and target sizes differ");
  const double n = static_cast<double>(pred.size());
  LossValue<Real> out;
  out.grad.resize(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred[i]) - static_cast<double>(target[i]);
    sum += d * d;
    out.grad[i] = static_cast<Real>(2.0 * d / n);
  }
  out.value = sum / n;
  return out;
}

template <typename Real>
LossValue<Real> soft_dice(std::span<const Real> probs, std::span<const Real> onehot,
                          std::size_t classes, double smooth) {
  if (classes < 2) throw Error(ErrorCode::ShapeMismatch, "soft_dice needs at least two classes");
  if (probs.size() != onehot.size() || probs.empty() || probs.size() % classes != 0)
    throw Error(ErrorCode::ShapeMismatch, "soft_dice: probability and target shapes differ");
  const std::size_t rows = probs.size() / classes;

  std::vector<double> inter(classes, 0.0), psum(classes, 0.0), gsum(classes, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double row_sum = 0.0;
    int hot = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      const double p = probs[i * classes + c];
      const Real g = onehot[i * classes + c];
      row_sum += p;
      if (g == Real(1)) ++hot;
      else if (g != Real(0)) hot = -1000;
      inter[c] += p * static_cast<double>(g);
      psum[c] += p;
      gsum[c] += static_cast<double>(g);
    }
    if (std::abs(row_sum - 1.0) > 1e-5)
      throw Error(ErrorCode::NotNormalized, "probability row does not sum to 1");
    if (hot != 1) throw Error(ErrorCode::NotNormalized, "target row is not one-hot");
  }

  LossValue<Real> out;
  out.grad.resize(probs.size());
  double dice_total = 0.0;
  std::vector<double> coef_g(classes), coef_c(classes);
  const double inv_c = 1.0 / static_cast<double>(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const double num = 2.0 * inter[c] + smooth;
    const double den = psum[c] + gsum[c] + smooth;
    dice_total += num / den;
    // d(num/den)/dp_ic = (2 g_ic den - num) / den^2
    coef_g[c] = -inv_c * 2.0 / den;
    coef_c[c] = inv_c * num / (den * den);
  }
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < classes; ++c) {
      const std::size_t k = i * classes + c;
      out.grad[k] = static_cast<Real>(coef_g[c] * static_cast<double>(onehot[k]) + coef_c[c]);
    }
  out.value = 1.0 - dice_total * inv_c;
  return out;
}

template <typename Real>
std::vector<Real> softmax_rows(std::span<const Real> logits, std::size_t classes) {
  if (classes == 0 || logits.size() % classes != 0)
    throw Error(ErrorCode::ShapeMismatch, "softmax_rows: length not a multiple of class count");
  std::vector<Real> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); i += classes) {
    Real peak = logits[i];
    for (std::size_t c = 0; c < classes; ++c) {
      if (!std::isfinite(logits[i + c])) throw Error(ErrorCode::NonFiniteInput, "non-finite logit");
      peak = std::max(peak, logits[i + c]);
    }
    Real total = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      out[i + c] = std::exp(logits[i + c] - peak);
      total += out[i + c];
    }
    for (std::size_t c = 0; c < classes; ++c) out[i + c] /= total;
  }
  return out;
}

template <typename Real>
std::vector<Real> softmax_rows_backward(std::span<const Real> probs, std::span<const Real> grad,
                                        std::size_t classes) {
  if (probs.size() != grad.size() || classes == 0 || probs.size() % classes != 0)
    throw Error(ErrorCode::ShapeMismatch, "softmax_rows_backward: shape mismatch");
  std::vector<Real> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); i += classes) {
    Real dot = 0;
    for (std::size_t c = 0; c < classes; ++c) dot += probs[i + c] * grad[i + c];
    for (std::size_t c = 0; c < classes; ++c) out[i + c] = probs[i + c] * (grad[i + c] - dot);
  }
  return out;
}

template LossValue<float> mse<float>(std::span<const float>, std::span<const float>);
template LossValue<double> mse<double>(std::span<const double>, std::span<const double>);
template LossValue<float> soft_dice<float>(std::span<const float>, std::span<const float>, std::size_t, double);
template LossValue<double> soft_dice<double>(std::span<const double>, std::span<const double>, std::size_t, double);
template std::vector<float> softmax_rows<float>(std::span<const float>, std::size_t);
template std::vector<double> softmax_rows<double>(std::span<const double>, std::size_t);
template std::vector<float> softmax_rows_backward<float>(std::span<const float>, std::span<const float>, std::size_t);
template std::vector<double> softmax_rows_backward<double>(std::span<const double>, std::span<const double>, std::size_t);

}  // namespace wrinkleforge
