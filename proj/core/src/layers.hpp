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
#include <vector>

#include "wrinkleforge/tensor.hpp"

// Building blocks of the U-Net. Each forward has a matching backward that
// consumes the cached forward quantities. Batches are processed sample by
// sample in index order.
namespace wrinkleforge::layers {

/// Same-size convolution (zero padding k/2, stride 1).
/// weight: (Cout, Cin, k, k), bias: (Cout, 1, 1, 1).
template <typename Real>
BasicTensor4<Real> conv2d(const BasicTensor4<Real>& x, const BasicTensor4<Real>& weight,
                          const BasicTensor4<Real>& bias);

/// Accumulates weight/bias gradients into their grad buffers and, when
/// `dx` is non-null, writes the input gradient.
template <typename Real>
void conv2d_backward(const BasicTensor4<Real>& x, BasicTensor4<Real>& weight, BasicTensor4<Real>& bias,
                     const BasicTensor4<Real>& dy, BasicTensor4<Real>* dx);

template <typename Real>
void relu_inplace(BasicTensor4<Real>& x);

/// dy <- dy * [y > 0]
template <typename Real>
void relu_backward_inplace(const BasicTensor4<Real>& y, BasicTensor4<Real>& dy);

template <typename Real>
void sigmoid_inplace(BasicTensor4<Real>& x);

/// dy <- dy * y (1 - y)
template <typename Real>
void sigmoid_backward_inplace(const BasicTensor4<Real>& y, BasicTensor4<Real>& dy);

/// 2x2 max pooling; `argmax` receives the flat input index of each winner
/// (first maximum in scan order).
template <typename Real>
BasicTensor4<Real> maxpool2(const BasicTensor4<Real>& x, std::vector<std::uint32_t>& argmax);

template <typename Real>
BasicTensor4<Real> maxpool2_backward(const BasicTensor4<Real>& dy, const std::vector<std::uint32_t>& argmax,
                                     int in_h, int in_w);

/// Nearest-neighbour 2x upsampling.
template <typename Real>
BasicTensor4<Real> upsample2(const BasicTensor4<Real>& x);

template <typename Real>
BasicTensor4<Real> upsample2_backward(const BasicTensor4<Real>& dy);

/// Channel concatenation [a, b].
template <typename Real>
BasicTensor4<Real> concat(const BasicTensor4<Real>& a, const BasicTensor4<Real>& b);

/// Splits a gradient produced for concat(a, b) back into the two parts.
template <typename Real>
void split(const BasicTensor4<Real>& dy, int channels_a, BasicTensor4<Real>& da, BasicTensor4<Real>& db);

}  // namespace wrinkleforge::layers
