// Copyright 2026 The tfqkd Authors
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


#include <benchmark/benchmark.h>

#include "tfqkd/channel_model.hpp"
#include "tfqkd/decoy_lp.hpp"
#include "tfqkd/optimizer.hpp"

namespace {

using namespace tfqkd;

const ChannelScenario kScenario{0.01, 0.1, 1e-8, 0.02, 0.0};

void BM_YieldTable(benchmark::State& state) {
  const int max_photons = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(asymptotic_yield_table(kScenario, max_photons));
}
BENCHMARK(BM_YieldTable)->Arg(4)->Arg(12)->Arg(20);

void BM_DecoyLpSingleBound(benchmark::State& state) {
  const auto obs = simulate_observations(kScenario, {0.3, 0.05, 0}, {0.1, 0.02, 0}, 1e12,
                                         {{0.2, 0.2, 0.1}, {0.25, 0.15, 0.1}});
  const LpProblem problem = build_problem(obs, true);
  for (auto _ : state) benchmark::DoNotOptimize(solve_upper_bound(problem, {1, 1}));
}
BENCHMARK(BM_DecoyLpSingleBound)->Unit(benchmark::kMicrosecond);

void BM_KeyRateAsymptotic(benchmark::State& state) {
  const KeyRateEvaluator ev(kScenario, EvaluationMode::asymptotic());
  ProtocolParameters p;
  p.s_a = 0.3;
  p.s_b = 0.03;
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(p));
}
BENCHMARK(BM_KeyRateAsymptotic)->Unit(benchmark::kMicrosecond);

void BM_KeyRateFinite(benchmark::State& state) {
  const KeyRateEvaluator ev(kScenario, EvaluationMode::finite_size(1e12));
  ProtocolParameters p;
  p.s_a = 0.3;
  p.s_b = 0.03;
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(p));
}
BENCHMARK(BM_KeyRateFinite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
