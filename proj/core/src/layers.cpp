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

#include "layers.hpp"

#include <Eigen/Core>

#include <cmath>

namespace wrinkleforge::layers {

namespace {

template <typename Real>
using RowMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using MatrixMap = Eigen::Map<RowMatrix<Real>>;
template <typename Real>
using ConstMatrixMap = Eigen::Map<const RowMatrix<Real>>;

// col has (cin * k * k) rows and (h * w) columns.
template <typename Real>
void im2col(const Real* x, int cin, int h, int w, int k, Real* col) {
  const int pad = k / 2;
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  for (int c = 0; c < cin; ++c) {
    const Real* plane = x + static_cast<std::size_t>(c) * hw;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        Real* row = col + (static_cast<std::size_t>(c) * k * k + ky * k + kx) * hw;
        const int dx = kx - pad;
        const int x_lo = std::max(0, -dx);
        const int x_hi = std::min(w, w - dx);
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - pad;
          Real* out = row + static_cast<std::size_t>(y) * w;
          if (sy < 0 || sy >= h) {
            std::fill(out, out + w, Real(0));
            continue;
          }
          const Real* src = plane + static_cast<std::size_t>(sy) * w;
          std::fill(out, out + x_lo, Real(0));
          for (int xx = x_lo; xx < x_hi; ++xx) out[xx] = src[xx + dx];
          std::fill(out + x_hi, out + w, Real(0));
        }
      }
    }
  }
}

template <typename Real>
void col2im(const Real* col, int cin, int h, int w, int k, Real* x) {
  const int pad = k / 2;
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  std::fill(x, x + static_cast<std::size_t>(cin) * hw, Real(0));
  for (int c = 0; c < cin; ++c) {
    Real* plane = x + static_cast<std::size_t>(c) * hw;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const Real* row = col + (static_cast<std::size_t>(c) * k * k + ky * k + kx) * hw;
        const int dx = kx - pad;
        const int x_lo = std::max(0, -dx);
        const int x_hi = std::min(w, w - dx);
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - pad;
          if (sy < 0 || sy >= h) continue;
          const Real* in = row + static_cast<std::size_t>(y) * w;
          Real* dst = plane + static_cast<std::size_t>(sy) * w;
          for (int xx = x_lo; xx < x_hi; ++xx) dst[xx + dx] += in[xx];
        }
      }
    }
  }
}

}  // namespace

template <typename Real>
BasicTensor4<Real> conv2d(const BasicTensor4<Real>& x, const BasicTensor4<Real>& weight,
                          const BasicTensor4<Real>& bias) {
  const int cout = weight.n();
  const int cin = weight.c();
  const int k = weight.h();
  if (x.c() != cin) throw Error(ErrorCode::ShapeMismatch, "conv2d: input channel mismatch");
  const int h = x.h();
  const int w = x.w();
  const Eigen::Index hw = static_cast<Eigen::Index>(h) * w;
  const Eigen::Index kdim = static_cast<Eigen::Index>(cin) * k * k;

  BasicTensor4<Real> y(x.n(), cout, h, w);
  ConstMatrixMap<Real> wmat(weight.values().data(), cout, kdim);
  Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, 1>> b(bias.values().data(), cout);
  AlignedVector<Real> col(k == 1 ? 0 : static_cast<std::size_t>(kdim * hw));
  for (int n = 0; n < x.n(); ++n) {
    const Real* src = x.sample(n);
    if (k != 1) {
      im2col(src, cin, h, w, k, col.data());
      src = col.data();
    }
    ConstMatrixMap<Real> cmat(src, kdim, hw);
    MatrixMap<Real> ymat(y.sample(n), cout, hw);
    ymat.noalias() = wmat * cmat;
    ymat.colwise() += b;
  }
  return y;
}

template <typename Real>
void conv2d_backward(const BasicTensor4<Real>& x, BasicTensor4<Real>& weight, BasicTensor4<Real>& bias,
                     const BasicTensor4<Real>& dy, BasicTensor4<Real>* dx) {
  const int cout = weight.n();
  const int cin = weight.c();
  const int k = weight.h();
  const int h = x.h();
  const int w = x.w();
  const Eigen::Index hw = static_cast<Eigen::Index>(h) * w;
  const Eigen::Index kdim = static_cast<Eigen::Index>(cin) * k * k;

  weight.enable_grad();
  bias.enable_grad();
  ConstMatrixMap<Real> wmat(weight.values().data(), cout, kdim);
  MatrixMap<Real> wgrad(weight.grad().data(), cout, kdim);
  Eigen::Map<Eigen::Matrix<Real, Eigen::Dynamic, 1>> bgrad(bias.grad().data(), cout);
  if (dx != nullptr) *dx = BasicTensor4<Real>(x.n(), cin, h, w);

  AlignedVector<Real> col(k == 1 ? 0 : static_cast<std::size_t>(kdim * hw));
  AlignedVector<Real> dcol(dx != nullptr && k != 1 ? static_cast<std::size_t>(kdim * hw) : 0);
  for (int n = 0; n < x.n(); ++n) {
    const Real* src = x.sample(n);
    if (k != 1) {
      im2col(src, cin, h, w, k, col.data());
      src = col.data();
    }
    ConstMatrixMap<Real> cmat(src, kdim, hw);
    ConstMatrixMap<Real> dymat(dy.sample(n), cout, hw);
    wgrad.noalias() += dymat * cmat.transpose();
    bgrad += dymat.rowwise().sum();
    if (dx != nullptr) {
      if (k == 1) {
        MatrixMap<Real> dxmat(dx->sample(n), kdim, hw);
        dxmat.noalias() = wmat.transpose() * dymat;
      } else {
        MatrixMap<Real> dcmat(dcol.data(), kdim, hw);
        dcmat.noalias() = wmat.transpose() * dymat;
        col2im(dcol.data(), cin, h, w, k, dx->sample(n));
      }
    }
  }
}

template <typename Real>
void relu_inplace(BasicTensor4<Real>& x) {
  for (auto& v : x.values()) v = v > Real(0) ? v : Real(0);
}

template <typename Real>
void relu_backward_inplace(const BasicTensor4<Real>& y, BasicTensor4<Real>& dy) {
  auto yv = y.values();
  auto g = dy.values();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(yv[i] > Real(0))) g[i] = Real(0);
}

template <typename Real>
void sigmoid_inplace(BasicTensor4<Real>& x) {
  for (auto& v : x.values()) v = Real(1) / (Real(1) + std::exp(-v));
}

template <typename Real>
void sigmoid_backward_inplace(const BasicTensor4<Real>& y, BasicTensor4<Real>& dy) {
  auto yv = y.values();
  auto g = dy.values();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= yv[i] * (Real(1) - yv[i]);
}

template <typename Real>
BasicTensor4<Real> maxpool2(const BasicTensor4<Real>& x, std::vector<std::uint32_t>& argmax) {
  const int oh = x.h() / 2;
  const int ow = x.w() / 2;
  BasicTensor4<Real> y(x.n(), x.c(), oh, ow);
  argmax.resize(y.size());
  auto in = x.values();
  auto out = y.values();
  std::size_t o = 0;
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < x.c(); ++c) {
      const std::size_t base = (static_cast<std::size_t>(n) * x.c() + c) * x.plane();
      for (int yy = 0; yy < oh; ++yy) {
        for (int xx = 0; xx < ow; ++xx, ++o) {
          std::size_t best = base + static_cast<std::size_t>(2 * yy) * x.w() + 2 * xx;
          const std::size_t cand[3] = {best + 1, best + static_cast<std::size_t>(x.w()),
                                       best + static_cast<std::size_t>(x.w()) + 1};
          for (std::size_t idx : cand)
            if (in[idx] > in[best]) best = idx;
          out[o] = in[best];
          argmax[o] = static_cast<std::uint32_t>(best);
        }
      }
    }
  }
  return y;
}

template <typename Real>
BasicTensor4<Real> maxpool2_backward(const BasicTensor4<Real>& dy, const std::vector<std::uint32_t>& argmax,
                                     int in_h, int in_w) {
  BasicTensor4<Real> dx(dy.n(), dy.c(), in_h, in_w);
  auto g = dy.values();
  auto out = dx.values();
  for (std::size_t i = 0; i < g.size(); ++i) out[argmax[i]] += g[i];
  return dx;
}

template <typename Real>
BasicTensor4<Real> upsample2(const BasicTensor4<Real>& x) {
  BasicTensor4<Real> y(x.n(), x.c(), x.h() * 2, x.w() * 2);
  for (int n = 0; n < x.n(); ++n)
    for (int c = 0; c < x.c(); ++c)
      for (int yy = 0; yy < y.h(); ++yy)
        for (int xx = 0; xx < y.w(); ++xx) y.at(n, c, yy, xx) = x.at(n, c, yy / 2, xx / 2);
  return y;
}

template <typename Real>
BasicTensor4<Real> upsample2_backward(const BasicTensor4<Real>& dy) {
  BasicTensor4<Real> dx(dy.n(), dy.c(), dy.h() / 2, dy.w() / 2);
  for (int n = 0; n < dy.n(); ++n)
    for (int c = 0; c < dy.c(); ++c)
      for (int yy = 0; yy < dx.h(); ++yy)
        for (int xx = 0; xx < dx.w(); ++xx)
          dx.at(n, c, yy, xx) = dy.at(n, c, 2 * yy, 2 * xx) + dy.at(n, c, 2 * yy, 2 * xx + 1) +
                                dy.at(n, c, 2 * yy + 1, 2 * xx) + dy.at(n, c, 2 * yy + 1, 2 * xx + 1);
  return dx;
}

template <typename Real>
BasicTensor4<Real> concat(const BasicTensor4<Real>& a, const BasicTensor4<Real>& b) {
  if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w())
    throw Error(ErrorCode::ShapeMismatch, "concat: incompatible tensors");
  BasicTensor4<Real> y(a.n(), a.c() + b.c(), a.h(), a.w());
  for (int n = 0; n < a.n(); ++n) {
    std::copy_n(a.sample(n), a.sample_size(), y.sample(n));
    std::copy_n(b.sample(n), b.sample_size(), y.sample(n) + a.sample_size());
  }
  return y;
}

template <typename Real>
void split(const BasicTensor4<Real>& dy, int channels_a, BasicTensor4<Real>& da, BasicTensor4<Real>& db) {
  da = BasicTensor4<Real>(dy.n(), channels_a, dy.h(), dy.w());
  db = BasicTensor4<Real>(dy.n(), dy.c() - channels_a, dy.h(), dy.w());
  for (int n = 0; n < dy.n(); ++n) {
    std::copy_n(dy.sample(n), da.sample_size(), da.sample(n));
    std::copy_n(dy.sample(n) + da.sample_size(), db.sample_size(), db.sample(n));
  }
}

#define WRINKLEFORGE_INSTANTIATE_LAYERS(Real)                                                          \
  template BasicTensor4<Real> conv2d(const BasicTensor4<Real>&, const BasicTensor4<Real>&,             \
                                     const BasicTensor4<Real>&);                                       \
  template void conv2d_backward(const BasicTensor4<Real>&, BasicTensor4<Real>&, BasicTensor4<Real>&,  \
                                const BasicTensor4<Real>&, BasicTensor4<Real>*);                       \
  template void relu_inplace(BasicTensor4<Real>&);                                                     \
  template void relu_backward_inplace(const BasicTensor4<Real>&, BasicTensor4<Real>&);                 \
  template void sigmoid_inplace(BasicTensor4<Real>&);                                                  \
  template void sigmoid_backward_inplace(const BasicTensor4<Real>&, BasicTensor4<Real>&);              \
  template BasicTensor4<Real> maxpool2(const BasicTensor4<Real>&, std::vector<std::uint32_t>&);        \
  template BasicTensor4<Real> maxpool2_backward(const BasicTensor4<Real>&,                             \
                                                const std::vector<std::uint32_t>&, int, int);          \
  template BasicTensor4<Real> upsample2(const BasicTensor4<Real>&);                                    \
  template BasicTensor4<Real> upsample2_backward(const BasicTensor4<Real>&);                           \
  template BasicTensor4<Real> concat(const BasicTensor4<Real>&, const BasicTensor4<Real>&);            \
  template void split(const BasicTensor4<Real>&, int, BasicTensor4<Real>&, BasicTensor4<Real>&);

WRINKLEFORGE_INSTANTIATE_LAYERS(float)
WRINKLEFORGE_INSTANTIATE_LAYERS(double)

#undef WRINKLEFORGE_INSTANTIATE_LAYERS

}  // namespace wrinkleforge::layers
