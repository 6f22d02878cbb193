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

#include <random>

#include "crowdsense/admm.hpp"

namespace {

using namespace crowdsense;

std::vector<AgentObjective> make_objectives(int agents, int dim,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<AgentObjective> objectives;
  for (int i = 0; i < agents; ++i) {
    Eigen::MatrixXd b_mat(2 * dim, dim);
    Eigen::VectorXd b_vec(2 * dim);
    for (int r = 0; r < 2 * dim; ++r) {
      for (int c = 0; c < dim; ++c) b_mat(r, c) = gauss(rng);
      b_vec[r] = gauss(rng);
    }
    objectives.push_back(AgentObjective::quadratic(b_mat, b_vec));
  }
  return objectives;
}

void CentralConsensus(benchmark::State& state) {
  const auto agents = static_cast<int>(state.range(0));
  std::mt19937_64 rng(6);
  const auto objectives = make_objectives(agents, 5, rng);
  const auto topo = Topology::complete(agents);
  AdmmConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_consensus(objectives, topo, config));
  }
}
BENCHMARK(CentralConsensus)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void NeighborConsensus(benchmark::State& state) {
  const auto agents = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const auto objectives = make_objectives(agents, 5, rng);
  const auto topo = Topology::path(agents);
  AdmmConfig config;
  config.mode = AdmmMode::kNeighbor;
  config.max_iters = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_consensus(objectives, topo, config));
  }
}
BENCHMARK(NeighborConsensus)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
