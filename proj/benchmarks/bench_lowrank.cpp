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

#include "crowdsense/lowrank.hpp"

namespace {

using namespace crowdsense;

Eigen::MatrixXd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = gauss(rng);
  }
  return m;
}

void SVT(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd m = random_gaussian(rng, n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(svt(m, 0.5));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SVT)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void RobustPca(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  Eigen::MatrixXd y = random_gaussian(rng, n, 2) * random_gaussian(rng, 2, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (unit(rng) < 0.05) y(r, c) += unit(rng) < 0.5 ? 10.0 : -10.0;
    }
  }
  const auto config = SolverConfig::for_matrix(y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(robust_pca(y, config));
  }
}
BENCHMARK(RobustPca)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void RobustCompletion(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd y =
      random_gaussian(rng, n, 2) * random_gaussian(rng, 2, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ObservationMask::Entry> seen;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (unit(rng) < 0.4) seen.emplace_back(r, c);
    }
  }
  const ObservationMask mask(n, n, std::move(seen));
  const auto config = SolverConfig::for_masked(y, mask);
  for (auto _ : state) {
    benchmark::DoNotOptimize(robust_completion(y, mask, config));
  }
}
BENCHMARK(RobustCompletion)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
