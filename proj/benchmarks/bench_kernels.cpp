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

#include "crowdsense/copula.hpp"
#include "crowdsense/kernels.hpp"

namespace {

using namespace crowdsense;

Eigen::MatrixXd random_points(std::mt19937_64& rng, int n, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) pts(i, d) = gauss(rng);
  }
  return pts;
}

void GramGaussian(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto pts = random_points(rng, static_cast<int>(state.range(0)), 5);
  const auto spec = KernelSpec::gaussian(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram_matrix(spec, pts));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(GramGaussian)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void RidgeFit(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const auto n = static_cast<int>(state.range(0));
  const auto pts = random_points(rng, n, 5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = gauss(rng);
  const auto spec = KernelSpec::gaussian(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ridge_fit(spec, pts, y, 0.1));
  }
}
BENCHMARK(RidgeFit)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void GaussianCopulaDensity(benchmark::State& state) {
  const auto dim = static_cast<int>(state.range(0));
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i != j) corr(i, j) = 0.3 / (1.0 + std::abs(i - j));
    }
  }
  const auto copula = CopulaModel::gaussian(corr);
  Eigen::VectorXd u = Eigen::VectorXd::Constant(dim, 0.37);
  for (auto _ : state) {
    benchmark::DoNotOptimize(copula_density(copula, u));
  }
}
BENCHMARK(GaussianCopulaDensity)->Arg(2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
