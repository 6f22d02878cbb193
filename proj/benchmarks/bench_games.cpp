// Copyright 2026 The CrowdSense Authors
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

#include "crowdsense/games.hpp"
#include "crowdsense/scenario.hpp"

namespace {

using namespace crowdsense;

void LearningSteps(benchmark::State& state) {
  const auto coord = make_coordination_game(4, 3);
  LearnerConfig cfg;
  cfg.step_size = 0.005;  // slow enough to keep the horizon busy
  cfg.horizon = static_cast<int>(state.range(0));
  cfg.seed = 8;
  const auto env = PayoffEnvironment::additive_uniform(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_learning(coord, env, cfg));
  }
}
BENCHMARK(LearningSteps)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void NashEnumeration(benchmark::State& state) {
  const auto net = RoadNetwork::corridors(1, 3, 5);
  const auto truth =
      generate_ground_truth(static_cast<int>(net.links.size()), 8, 2, 9);
  const auto rg = build_route_game(net, truth.values,
                                   static_cast<int>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_pure_nash(rg.game.base));
  }
}
BENCHMARK(NashEnumeration)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void ScenarioRun(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.hops = 5;
  cfg.slots = 24;
  cfg.learn_horizon = 2000;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(cfg, seed++));
  }
}
BENCHMARK(ScenarioRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
