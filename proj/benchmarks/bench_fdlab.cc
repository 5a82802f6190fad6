// Copyright 2026 The fdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <benchmark/benchmark.h>

#include "fdlab/distortion.h"
#include "fdlab/distribution.h"
#include "fdlab/gallery.h"
#include "fdlab/monotonicity.h"
#include "fdlab/sobolev.h"
#include "fdlab/staircase.h"

namespace {

using namespace fdlab;

ScalarField ConeOn(int n) {
  const Example ex = make_example("cone");
  return sample_scalar(ex, example_grid(ex, n));
}

void BM_UpperDistribution(benchmark::State& state) {
  const ScalarField f = ConeOn(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(upper_distribution(f).total());
  }
  state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_UpperDistribution)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SuperlevelCheck(benchmark::State& state) {
  const ScalarField f = ConeOn(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(superlevel_check(f).rhs);
  }
}
BENCHMARK(BM_SuperlevelCheck)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Differential(benchmark::State& state) {
  const Example ex = make_example("winding", {{"k", 3}});
  const VectorMap m =
      sample_map(ex, example_grid(ex, static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(differential(m).size());
  }
}
BENCHMARK(BM_Differential)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_VerifyDistortion(benchmark::State& state) {
  const Example ex = make_example("radial_log");
  const GridPtr g = example_grid(ex, static_cast<int>(state.range(0)));
  const VectorMap m = sample_map(ex, g);
  const DistortionData data = sample_data(ex, g, 4, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_distortion(m, data).violation_count);
  }
}
BENCHMARK(BM_VerifyDistortion)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_InverseStaircase(benchmark::State& state) {
  const ScalarField f = ConeOn(256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        inverse_distribution_staircase(f, 0.5, 0.01, 10000).breakpoints.size());
  }
}
BENCHMARK(BM_InverseStaircase)->Unit(benchmark::kMillisecond);

void BM_SupBoundChain(benchmark::State& state) {
  const Example ex = make_example("winding", {{"k", 2}});
  const GridPtr g = example_grid(ex, static_cast<int>(state.range(0)));
  const VectorMap m = sample_map(ex, g);
  const ScalarField K = sample(g, [](const Point&) { return 2.0; });
  const ScalarField s = residual_defect(m, K);
  const DistortionData data(K, {s.values().begin(), s.values().end()}, 4, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sup_bound_chain(m, data, 0, 0.5, TruncateMode::kAbove).final_bound);
  }
}
BENCHMARK(BM_SupBoundChain)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
