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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrinkleforge/tensor.hpp"

namespace wrinkleforge {

/// Regression heads squash through a sigmoid; segmentation heads emit logits.
enum class HeadKind { Regression, Segmentation };

struct UNetSpec {
  int in_channels = 3;
  int out_channels = 1;
  int base_width = 16;
  int depth = 3;  // number of 2x2 poolings; the bottleneck runs at base_width * 2^depth
  std::uint64_t seed = 0;
  HeadKind head = HeadKind::Regression;

  /// Throws InvalidSpec.
  void validate() const;
  int width_at(int level) const noexcept { return base_width << level; }

  friend bool operator==(const UNetSpec&, const UNetSpec&) = default;
};

void to_json(nlohmann::json& j, const UNetSpec& spec);
void from_json(const nlohmann::json& j, UNetSpec& spec);

struct ParameterShape {
  std::string name;
  std::vector<int> shape;  // weights: {out, in, k, k}; biases: {out}

  std::size_t element_count() const noexcept;
};

/// Every learnable array of the network, in canonical order.
std::vector<ParameterShape> layer_inventory(const UNetSpec& spec);
std::size_t parameter_count(const UNetSpec& spec);

struct Checkpoint;

template <typename Real>
struct NamedParameter {
  std::string name;
  BasicTensor4<Real> tensor;  // value and grad
};

/// U-Net with `depth` encoder levels, a bottleneck and `depth` decoder levels.
///   encoder level: conv3x3 -> ReLU -> conv3x3 -> ReLU -> maxpool 2x2
///   decoder level: nearest 2x upsample -> concat(skip, up) -> conv3x3 -> ReLU -> conv3x3 -> ReLU
///   head: conv1x1 to out_channels (sigmoid for a regression head)
/// A model instance caches activations and is not safe for concurrent use.
template <typename Real>
class UNet {
 public:
  /// He-normal weights drawn from spec.seed, zero biases.
  explicit UNet(const UNetSpec& spec);
  /// Loads the parameters of a checkpoint; IncompatibleCheckpoint when names
  /// or shapes disagree with the checkpoint's spec.
  explicit UNet(const Checkpoint& checkpoint);

  const UNetSpec& spec() const noexcept { return spec_; }
  std::size_t parameter_count() const noexcept;

  std::vector<NamedParameter<Real>>& parameters() noexcept { return params_; }
  const std::vector<NamedParameter<Real>>& parameters() const noexcept { return params_; }
  NamedParameter<Real>& parameter(const std::string& name);

  /// Output (n, out_channels, h, w). ShapeMismatch on wrong channel count,
  /// IndivisibleSpatialDims unless h and w are multiples of 2^depth.
  BasicTensor4<Real> forward(const BasicTensor4<Real>& x);

  /// Accumulates dL/dtheta into every parameter's grad buffer, given dL/doutput.
  /// NoForwardPass if forward has not run; ShapeMismatch on wrong dims.
  void backward(const BasicTensor4<Real>& output_grad);

  void zero_grad();

  /// Rescales each convolution so its ReLU output has unit RMS on `x` and
  /// compensates in the layers that consume it. ReLU is positively
  /// homogeneous, so the network computes the same function afterwards.
  void balance_activations(const BasicTensor4<Real>& x);

  /// Parameters as float arrays; optimizer state and stamps left empty.
  Checkpoint to_checkpoint() const;

 private:
  struct Level {
    BasicTensor4<Real> input;  // into conv1
    BasicTensor4<Real> mid;    // after conv1 + ReLU
    BasicTensor4<Real> out;    // after conv2 + ReLU
  };

  Level run_block(const BasicTensor4<Real>& x, std::size_t conv1);
  BasicTensor4<Real> backward_block(Level& level, BasicTensor4<Real> grad, std::size_t conv1, bool need_dx);
  void build_parameters();

  UNetSpec spec_;
  std::vector<NamedParameter<Real>> params_;

  bool has_forward_ = false;
  std::vector<Level> encoder_;
  std::vector<std::vector<std::uint32_t>> pool_index_;
  Level bottleneck_;
  std::vector<Level> decoder_;  // indexed by level
  BasicTensor4<Real> output_;
};

extern template class UNet<float>;
extern template class UNet<double>;

using Model = UNet<float>;

}  // namespace wrinkleforge
