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

#include <benchmark/benchmark.h>

#include <vector>

#include "wrinkleforge/optim.hpp"
#include "wrinkleforge/rng.hpp"
#include "wrinkleforge/unet.hpp"

using namespace wrinkleforge;

namespace {

UNetSpec spec_for(int width, int depth) {
  UNetSpec s;
  s.in_channels = 4;
  s.out_channels = 2;
  s.base_width = width;
  s.depth = depth;
  s.head = HeadKind::Segmentation;
  return s;
}

Tensor4 random_batch(int n, int c, int size) {
  Rng rng(2);
  Tensor4 x(n, c, size, size);
  for (auto& v : x.values()) v = static_cast<float>(rng.uniform());
  return x;
}

void BM_Forward(benchmark::State& state) {
  Model net(spec_for(8, static_cast<int>(state.range(1))));
  const Tensor4 x = random_batch(1, 4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_Forward)->Args({64, 2})->Args({64, 3})->Args({256, 3})->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  Model net(spec_for(8, 3));
  const Tensor4 x = random_batch(batch, 4, 64);
  AdamWState adam;
  for (auto _ : state) {
    net.zero_grad();
    const Tensor4 y = net.forward(x);
    net.backward(Tensor4(y.n(), y.c(), y.h(), y.w()));
    std::vector<std::span<float>> params;
    std::vector<std::span<const float>> grads;
    for (auto& p : net.parameters()) {
      params.push_back(p.tensor.values());
      grads.push_back(p.tensor.grad());
    }
    adamw_step(params, grads, adam, 1e-3);
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_TrainStep)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
