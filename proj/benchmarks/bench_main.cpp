// Copyright 2026 The gridcoal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot paths of one slot: allocation, Shapley,
// transition construction and the occupancy-measure LP.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "gridcoal/allocation.hpp"
#include "gridcoal/dynamics.hpp"
#include "gridcoal/experiment.hpp"
#include "gridcoal/lp.hpp"
#include "gridcoal/partition.hpp"
#include "gridcoal/policy.hpp"
#include "gridcoal/scenario.hpp"
#include "gridcoal/shapley.hpp"

namespace {

using namespace gridcoal;

const Scenario& scenario() {
  static const Scenario sc = load_scenario("paper6");
  return sc;
}

std::shared_ptr<const StateSpace> space_for(int n) {
  return std::make_shared<const StateSpace>(n);
}

void BM_GrandAllocation(benchmark::State& state) {
  const auto& sc = scenario();
  const SlotInputs in = make_slot_inputs(sc, 12);
  SlotGame game(in, make_action_grid(sc, in), space_for(static_cast<int>(in.num_providers())));
  const MarketView market = game.market(0);
  const Coalition grand = Coalition::all(static_cast<int>(in.num_providers()));
  for (auto _ : state) benchmark::DoNotOptimize(solve_allocation(grand, market));
}
BENCHMARK(BM_GrandAllocation)->Unit(benchmark::kMillisecond);

void BM_Shapley(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  std::vector<double> table(std::size_t{1} << n);
  for (auto& v : table) v = d(rng);
  table[0] = 0.0;
  const ValueOracle value = [&](Coalition c) { return table[c.mask()]; };
  for (auto _ : state) benchmark::DoNotOptimize(shapley_values(Coalition::all(n), value));
}
BENCHMARK(BM_Shapley)->DenseRange(3, 9, 3);

void BM_TransitionMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StateSpace space(n);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  PayoffTable payoffs(space.size(), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : payoffs) {
    for (auto& v : row) v = d(rng);
  }
  const DynamicsParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_transition_matrix(space, payoffs, params));
  }
}
BENCHMARK(BM_TransitionMatrix)->DenseRange(4, 6, 1)->Unit(benchmark::kMicrosecond);

void BM_SlotGameBuild(benchmark::State& state) {
  const auto& sc = scenario();
  const auto space = space_for(static_cast<int>(sc.num_providers()));
  for (auto _ : state) {
    SlotGame game = make_slot_game(sc, 12, space);
    benchmark::DoNotOptimize(CmdpModel::from_game(game));
  }
}
BENCHMARK(BM_SlotGameBuild)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_CmdpLp(benchmark::State& state) {
  const auto& sc = scenario();
  SlotGame game = make_slot_game(sc, 12, space_for(static_cast<int>(sc.num_providers())));
  const lp::LinearProgram program = build_cmdp_lp(CmdpModel::from_game(game));
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(program));
}
BENCHMARK(BM_CmdpLp)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_RandomLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.1, 1.0);
  lp::LinearProgram program(n);
  for (auto& c : program.objective) c = d(rng);
  for (std::size_t r = 0; r < n / 2; ++r) {
    std::vector<double> row(n);
    for (auto& v : row) v = d(rng);
    program.add_ub(std::move(row), static_cast<double>(n));
  }
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(program));
}
BENCHMARK(BM_RandomLp)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
