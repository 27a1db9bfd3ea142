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

#include <algorithm>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include "wrinkleforge/error.hpp"
#include "wrinkleforge/image.hpp"

namespace wrinkleforge {

/// Allocator with 64-byte alignment.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), alignment)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

/// N x C x H x W row-major values with an optional gradient buffer of the
/// same shape.
template <typename Real>
class BasicTensor4 {
 public:
  BasicTensor4() = default;
  BasicTensor4(int n, int c, int h, int w) : n_(n), c_(c), h_(h), w_(w) {
    if (n < 0 || c < 0 || h < 0 || w < 0)
      throw Error(ErrorCode::ShapeMismatch, "tensor dimensions must be non-negative");
    values_.assign(static_cast<std::size_t>(n) * c * h * w, Real(0));
  }

  int n() const noexcept { return n_; }
  int c() const noexcept { return c_; }
  int h() const noexcept { return h_; }
  int w() const noexcept { return w_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t plane() const noexcept { return static_cast<std::size_t>(h_) * w_; }
  std::size_t sample_size() const noexcept { return static_cast<std::size_t>(c_) * plane(); }

  bool same_dims(const BasicTensor4& o) const noexcept {
    return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }

  Real& at(int n, int c, int y, int x) noexcept { return values_[offset(n, c, y, x)]; }
  Real at(int n, int c, int y, int x) const noexcept { return values_[offset(n, c, y, x)]; }

  std::span<Real> values() noexcept { return values_; }
  std::span<const Real> values() const noexcept { return values_; }
  Real* sample(int n) noexcept { return values_.data() + static_cast<std::size_t>(n) * sample_size(); }
  const Real* sample(int n) const noexcept { return values_.data() + static_cast<std::size_t>(n) * sample_size(); }

  bool has_grad() const noexcept { return !grad_.empty(); }
  void enable_grad() {
    if (grad_.size() != values_.size()) grad_.assign(values_.size(), Real(0));
  }
  void zero_grad() { std::fill(grad_.begin(), grad_.end(), Real(0)); }
  std::span<Real> grad() noexcept { return grad_; }
  std::span<const Real> grad() const noexcept { return grad_; }

 private:
  std::size_t offset(int n, int c, int y, int x) const noexcept {
    return ((static_cast<std::size_t>(n) * c_ + c) * h_ + y) * w_ + x;
  }

  int n_ = 0;
  int c_ = 0;
  int h_ = 0;
  int w_ = 0;
  AlignedVector<Real> values_;
  AlignedVector<Real> grad_;
};

using Tensor4 = BasicTensor4<float>;

/// Packs same-sized images (interleaved HWC) into an N x C x H x W tensor.
template <typename Real>
BasicTensor4<Real> stack_images(std::span<const Image> images);

extern template BasicTensor4<float> stack_images<float>(std::span<const Image>);
extern template BasicTensor4<double> stack_images<double>(std::span<const Image>);

}  // namespace wrinkleforge
