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

#include "wrinkleforge/unet.hpp"

#include <algorithm>
#include <cmath>

#include "init.hpp"
#include "layers.hpp"
#include "wrinkleforge/checkpoint.hpp"
#include "wrinkleforge/error.hpp"

namespace wrinkleforge {

void UNetSpec::validate() const {
  if (depth < 1) throw Error(ErrorCode::InvalidSpec, "depth must be >= 1");
  if (depth > 8) throw Error(ErrorCode::InvalidSpec, "depth must be <= 8");
  if (base_width < 1) throw Error(ErrorCode::InvalidSpec, "base_width must be >= 1");
  if (in_channels < 1) throw Error(ErrorCode::InvalidSpec, "in_channels must be >= 1");
  if (out_channels < 1) throw Error(ErrorCode::InvalidSpec, "out_channels must be >= 1");
}

void to_json(nlohmann::json& j, const UNetSpec& spec) {
  j = {{"in_channels", spec.in_channels},
       {"out_channels", spec.out_channels},
       {"base_width", spec.base_width},
       {"depth", spec.depth},
       {"seed", spec.seed},
       {"head", spec.head == HeadKind::Regression ? "regression" : "segmentation"}};
}

void from_json(const nlohmann::json& j, UNetSpec& spec) {
  spec.in_channels = j.value("in_channels", spec.in_channels);
  spec.out_channels = j.value("out_channels", spec.out_channels);
  spec.base_width = j.value("base_width", spec.base_width);
  spec.depth = j.value("depth", spec.depth);
  spec.seed = j.value("seed", spec.seed);
  const std::string head = j.value("head", std::string(spec.out_channels == 1 ? "regression" : "segmentation"));
  if (head == "regression") spec.head = HeadKind::Regression;
  else if (head == "segmentation") spec.head = HeadKind::Segmentation;
  else throw Error(ErrorCode::InvalidSpec, "unknown head kind '" + head + "'");
}

std::size_t ParameterShape::element_count() const noexcept {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::vector<ParameterShape> layer_inventory(const UNetSpec& spec) {
  spec.validate();
  std::vector<ParameterShape> inv;
  auto conv = [&](const std::string& prefix, int in, int out, int k) {
    inv.push_back({prefix + ".weight", {out, in, k, k}});
    inv.push_back({prefix + ".bias", {out}});
  };
  for (int l = 0; l < spec.depth; ++l) {
    const int in = l == 0 ? spec.in_channels : spec.width_at(l - 1);
    conv("enc" + std::to_string(l) + ".conv1", in, spec.width_at(l), 3);
    conv("enc" + std::to_string(l) + ".conv2", spec.width_at(l), spec.width_at(l), 3);
  }
  conv("bottleneck.conv1", spec.width_at(spec.depth - 1), spec.width_at(spec.depth), 3);
  conv("bottleneck.conv2", spec.width_at(spec.depth), spec.width_at(spec.depth), 3);
  for (int l = spec.depth - 1; l >= 0; --l) {
    conv("dec" + std::to_string(l) + ".conv1", spec.width_at(l) + spec.width_at(l + 1), spec.width_at(l), 3);
    conv("dec" + std::to_string(l) + ".conv2", spec.width_at(l), spec.width_at(l), 3);
  }
  conv("head", spec.width_at(0), spec.out_channels, 1);
  return inv;
}

std::size_t parameter_count(const UNetSpec& spec) {
  std::size_t total = 0;
  for (const auto& p : layer_inventory(spec)) total += p.element_count();
  return total;
}

namespace {

template <typename Real>
BasicTensor4<Real> tensor_for(const ParameterShape& p) {
  if (p.shape.size() == 4) return BasicTensor4<Real>(p.shape[0], p.shape[1], p.shape[2], p.shape[3]);
  return BasicTensor4<Real>(p.shape[0], 1, 1, 1);
}

// Positions of each convolution's weight inside the inventory.
std::size_t encoder_conv(int level) { return static_cast<std::size_t>(4 * level); }
std::size_t bottleneck_conv(int depth) { return static_cast<std::size_t>(4 * depth); }
std::size_t decoder_conv(int depth, int level) {
  return static_cast<std::size_t>(4 * depth + 4 + 4 * (depth - 1 - level));
}
std::size_t head_conv(int depth) { return static_cast<std::size_t>(8 * depth + 4); }

}  // namespace

template <typename Real>
void UNet<Real>::build_parameters() {
  params_.clear();
  for (const auto& p : layer_inventory(spec_)) {
    NamedParameter<Real> np{p.name, tensor_for<Real>(p)};
    np.tensor.enable_grad();
    params_.push_back(std::move(np));
  }
}

template <typename Real>
UNet<Real>::UNet(const UNetSpec& spec) : spec_(spec) {
  spec_.validate();
  build_parameters();
  const auto inv = layer_inventory(spec_);
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const auto init = detail::he_normal(inv[i], stream_key({spec_.seed, hash_string(inv[i].name)}));
    std::copy(init.begin(), init.end(), params_[i].tensor.values().begin());
  }
}

template <typename Real>
UNet<Real>::UNet(const Checkpoint& checkpoint) : spec_(checkpoint.spec) {
  spec_.validate();
  check_inventory(checkpoint);
  build_parameters();
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& src = checkpoint.parameters[i].values;
    std::copy(src.begin(), src.end(), params_[i].tensor.values().begin());
  }
}

template <typename Real>
std::size_t UNet<Real>::parameter_count() const noexcept {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.tensor.size();
  return total;
}

template <typename Real>
NamedParameter<Real>& UNet<Real>::parameter(const std::string& name) {
  for (auto& p : params_)
    if (p.name == name) return p;
  throw Error(ErrorCode::InvalidSpec, "no parameter named " + name);
}

template <typename Real>
typename UNet<Real>::Level UNet<Real>::run_block(const BasicTensor4<Real>& x, std::size_t conv1) {
  Level level;
  level.input = x;
  level.mid = layers::conv2d(x, params_[conv1].tensor, params_[conv1 + 1].tensor);
  layers::relu_inplace(level.mid);
  level.out = layers::conv2d(level.mid, params_[conv1 + 2].tensor, params_[conv1 + 3].tensor);
  layers::relu_inplace(level.out);
  return level;
}

template <typename Real>
BasicTensor4<Real> UNet<Real>::forward(const BasicTensor4<Real>& x) {
  if (x.c() != spec_.in_channels)
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(spec_.in_channels) +
                                              " input channels, got " + std::to_string(x.c()));
  const int stride = 1 << spec_.depth;
  if (x.h() % stride != 0 || x.w() % stride != 0 || x.h() == 0 || x.w() == 0)
    throw Error(ErrorCode::IndivisibleSpatialDims,
                "input size must be a positive multiple of " + std::to_string(stride));

  encoder_.assign(static_cast<std::size_t>(spec_.depth), Level{});
  pool_index_.assign(static_cast<std::size_t>(spec_.depth), {});
  decoder_.assign(static_cast<std::size_t>(spec_.depth), Level{});

  BasicTensor4<Real> current = x;
  for (int l = 0; l < spec_.depth; ++l) {
    auto& level = encoder_[static_cast<std::size_t>(l)];
    level = run_block(current, encoder_conv(l));
    current = layers::maxpool2(level.out, pool_index_[static_cast<std::size_t>(l)]);
  }
  bottleneck_ = run_block(current, bottleneck_conv(spec_.depth));
  const BasicTensor4<Real>* deeper = &bottleneck_.out;
  for (int l = spec_.depth - 1; l >= 0; --l) {
    auto& level = decoder_[static_cast<std::size_t>(l)];
    const auto joined = layers::concat(encoder_[static_cast<std::size_t>(l)].out, layers::upsample2(*deeper));
    level = run_block(joined, decoder_conv(spec_.depth, l));
    deeper = &level.out;
  }
  const std::size_t head = head_conv(spec_.depth);
  output_ = layers::conv2d(*deeper, params_[head].tensor, params_[head + 1].tensor);
  if (spec_.head == HeadKind::Regression) layers::sigmoid_inplace(output_);
  has_forward_ = true;
  return output_;
}

template <typename Real>
BasicTensor4<Real> UNet<Real>::backward_block(Level& level, BasicTensor4<Real> grad, std::size_t conv1,
                                              bool need_dx) {
  layers::relu_backward_inplace(level.out, grad);
  BasicTensor4<Real> dmid;
  layers::conv2d_backward(level.mid, params_[conv1 + 2].tensor, params_[conv1 + 3].tensor, grad, &dmid);
  layers::relu_backward_inplace(level.mid, dmid);
  BasicTensor4<Real> dx;
  layers::conv2d_backward(level.input, params_[conv1].tensor, params_[conv1 + 1].tensor, dmid,
                          need_dx ? &dx : nullptr);
  return dx;
}

template <typename Real>
void UNet<Real>::backward(const BasicTensor4<Real>& output_grad) {
  if (!has_forward_) throw Error(ErrorCode::NoForwardPass, "backward called before forward");
  if (!output_grad.same_dims(output_))
    throw Error(ErrorCode::ShapeMismatch, "output gradient dims differ from the last forward output");

  BasicTensor4<Real> grad = output_grad;
  if (spec_.head == HeadKind::Regression) layers::sigmoid_backward_inplace(output_, grad);

  const std::size_t head = head_conv(spec_.depth);
  const BasicTensor4<Real>& head_in = decoder_.front().out;
  BasicTensor4<Real> current;
  layers::conv2d_backward(head_in, params_[head].tensor, params_[head + 1].tensor, grad, &current);

  std::vector<BasicTensor4<Real>> skip_grad(static_cast<std::size_t>(spec_.depth));
  for (int l = 0; l < spec_.depth; ++l) {
    auto& level = decoder_[static_cast<std::size_t>(l)];
    const auto djoined = backward_block(level, std::move(current), decoder_conv(spec_.depth, l), true);
    BasicTensor4<Real> dup;
    layers::split(djoined, encoder_[static_cast<std::size_t>(l)].out.c(), skip_grad[static_cast<std::size_t>(l)], dup);
    current = layers::upsample2_backward(dup);
  }
  current = backward_block(bottleneck_, std::move(current), bottleneck_conv(spec_.depth), true);
  for (int l = spec_.depth - 1; l >= 0; --l) {
    auto& level = encoder_[static_cast<std::size_t>(l)];
    auto dout = layers::maxpool2_backward(current, pool_index_[static_cast<std::size_t>(l)], level.out.h(),
                                          level.out.w());
    auto skip = skip_grad[static_cast<std::size_t>(l)].values();
    auto d = dout.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += skip[i];
    current = backward_block(level, std::move(dout), encoder_conv(l), l > 0);
  }
}

template <typename Real>
void UNet<Real>::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

namespace {

template <typename Real>
double rms_of(const BasicTensor4<Real>& t) {
  double sum = 0.0;
  for (Real v : t.values()) sum += static_cast<double>(v) * static_cast<double>(v);
  const double r = t.size() ? std::sqrt(sum / static_cast<double>(t.size())) : 0.0;
  return r > 0.0 && std::isfinite(r) ? r : 1.0;
}

// w[o, i, :, :] *= in_scale[i] / out_scale; b[o] /= out_scale.
template <typename Real>
void rescale_conv(BasicTensor4<Real>& w, BasicTensor4<Real>& b, const std::vector<double>& in_scale, double out_scale) {
  const std::size_t taps = static_cast<std::size_t>(w.h()) * static_cast<std::size_t>(w.w());
  auto wv = w.values();
  for (int o = 0; o < w.n(); ++o)
    for (int i = 0; i < w.c(); ++i) {
      const double f = in_scale[static_cast<std::size_t>(i)] / out_scale;
      Real* k = wv.data() + (static_cast<std::size_t>(o) * static_cast<std::size_t>(w.c()) + static_cast<std::size_t>(i)) * taps;
      for (std::size_t t = 0; t < taps; ++t) k[t] = static_cast<Real>(k[t] * f);
    }
  for (auto& v : b.values()) v = static_cast<Real>(v / out_scale);
}

}  // namespace

template <typename Real>
void UNet<Real>::balance_activations(const BasicTensor4<Real>& x) {
  forward(x);
  const int depth = spec_.depth;
  auto block = [&](const Level& level, std::size_t conv1, const std::vector<double>& in_scale) {
    const double mid = rms_of(level.mid);
    const double out = rms_of(level.out);
    rescale_conv(params_[conv1].tensor, params_[conv1 + 1].tensor, in_scale, mid);
    rescale_conv(params_[conv1 + 2].tensor, params_[conv1 + 3].tensor,
                 std::vector<double>(static_cast<std::size_t>(params_[conv1 + 2].tensor.c()), mid), out);
    return out;
  };

  std::vector<double> enc_scale(static_cast<std::size_t>(depth));
  std::vector<double> in_scale(static_cast<std::size_t>(spec_.in_channels), 1.0);
  for (int l = 0; l < depth; ++l) {
    enc_scale[static_cast<std::size_t>(l)] = block(encoder_[static_cast<std::size_t>(l)], encoder_conv(l), in_scale);
    in_scale.assign(static_cast<std::size_t>(spec_.width_at(l)), enc_scale[static_cast<std::size_t>(l)]);
  }
  double deeper = block(bottleneck_, bottleneck_conv(depth), in_scale);
  for (int l = depth - 1; l >= 0; --l) {
    in_scale.assign(static_cast<std::size_t>(spec_.width_at(l)), enc_scale[static_cast<std::size_t>(l)]);
    in_scale.insert(in_scale.end(), static_cast<std::size_t>(spec_.width_at(l + 1)), deeper);
    deeper = block(decoder_[static_cast<std::size_t>(l)], decoder_conv(depth, l), in_scale);
  }
  const std::size_t head = head_conv(depth);
  rescale_conv(params_[head].tensor, params_[head + 1].tensor,
               std::vector<double>(static_cast<std::size_t>(spec_.width_at(0)), deeper), 1.0);
  has_forward_ = false;
}

template <typename Real>
Checkpoint UNet<Real>::to_checkpoint() const {
  Checkpoint ckpt;
  ckpt.spec = spec_;
  const auto inv = layer_inventory(spec_);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    NamedArray arr{inv[i].name, inv[i].shape, {}};
    auto v = params_[i].tensor.values();
    arr.values.resize(v.size());
    std::transform(v.begin(), v.end(), arr.values.begin(), [](Real x) { return static_cast<float>(x); });
    ckpt.parameters.push_back(std::move(arr));
  }
  return ckpt;
}

template class UNet<float>;
template class UNet<double>;

}  // namespace wrinkleforge
