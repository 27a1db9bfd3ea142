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

#include "wrinkleforge/fusion.hpp"
#include "wrinkleforge/metrics.hpp"
#include "wrinkleforge/rng.hpp"

using namespace wrinkleforge;

namespace {

BinaryMask random_mask(Rng& rng, int size) {
  BinaryMask m(size, size);
  for (auto& v : m.values()) v = rng.bernoulli(0.1) ? 1 : 0;
  return m;
}

void BM_Evaluate(benchmark::State& state) {
  Rng rng(3);
  const int size = static_cast<int>(state.range(0));
  const BinaryMask a = random_mask(rng, size), b = random_mask(rng, size);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(a, b));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Evaluate)->Arg(256)->Arg(1024);

void BM_MajorityVote(benchmark::State& state) {
  Rng rng(4);
  const int size = static_cast<int>(state.range(0));
  const AnnotationSet set({"a", "b", "c"}, {random_mask(rng, size), random_mask(rng, size), random_mask(rng, size)});
  for (auto _ : state) benchmark::DoNotOptimize(majority_vote(set));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_MajorityVote)->Arg(256)->Arg(1024);

}  // namespace
