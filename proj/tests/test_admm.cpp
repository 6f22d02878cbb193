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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crowdsense/admm.hpp"

using namespace crowdsense;

namespace {

Eigen::VectorXd scalar_vec(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

Eigen::MatrixXd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = gauss(rng);
  }
  return m;
}

// Normal-equations oracle for the stacked least-squares consensus problem.
Eigen::VectorXd stacked_solution(const std::vector<AgentObjective>& objectives) {
  const int n = objectives.front().dimension();
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (const auto& obj : objectives) {
    normal += obj.b_matrix().transpose() * obj.b_matrix();
    rhs += obj.b_matrix().transpose() * obj.b_vector();
  }
  return normal.ldlt().solve(rhs);
}

}  // namespace

TEST_CASE("x update") {
  // already at the joint minimum
  const auto at_min = AgentObjective::scalar(2.5);
  CHECK(x_update(at_min, scalar_vec(2.5), scalar_vec(0.0), 1.0)[0] ==
        doctest::Approx(2.5).epsilon(1e-15));

  // zero objective reduces to the proximal point
  const auto zero_obj =
      AgentObjective::quadratic(Eigen::MatrixXd(0, 3), Eigen::VectorXd(0));
  Eigen::VectorXd z(3);
  z << 1.0, -2.0, 0.5;
  CHECK((x_update(zero_obj, z, Eigen::VectorXd::Zero(3), 2.0) - z).norm() <
        1e-15);

  // hand-minimized 1-D quadratic: argmin (x-4)^2 + x^2 = 2
  const auto pulled = AgentObjective::scalar(4.0);
  CHECK(x_update(pulled, scalar_vec(0.0), scalar_vec(0.0), 2.0)[0] ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("z updates") {
  const std::vector<Eigen::VectorXd> one_x = {scalar_vec(3.0)};
  const std::vector<Eigen::VectorXd> one_y = {scalar_vec(4.0)};
  CHECK(z_update_central(one_x, one_y, 2.0)[0] == doctest::Approx(5.0));

  const std::vector<Eigen::VectorXd> xs = {scalar_vec(1.0), scalar_vec(3.0)};
  const std::vector<Eigen::VectorXd> zeros = {scalar_vec(0.0), scalar_vec(0.0)};
  CHECK(z_update_central(xs, zeros, 1.0)[0] == doctest::Approx(2.0));

  const std::vector<Eigen::VectorXd> ys = {scalar_vec(2.0), scalar_vec(-2.0)};
  CHECK(z_update_central(xs, ys, 2.0)[0] == doctest::Approx(2.0).epsilon(1e-15));

  // neighbor update on a path graph 0-1-2 with xs = (0, 3, 6), ys = 0
  const std::vector<Eigen::VectorXd> path_x = {scalar_vec(0.0), scalar_vec(3.0),
                                               scalar_vec(6.0)};
  const std::vector<Eigen::VectorXd> path_y = {scalar_vec(0.0), scalar_vec(0.0),
                                               scalar_vec(0.0)};
  // agent 1 sees everyone
  CHECK(z_update_neighbor(path_x, path_y, 1.0)[0] == doctest::Approx(3.0));
  // agent 0 sees {0, 1}
  CHECK(z_update_neighbor({path_x[0], path_x[1]}, {path_y[0], path_y[1]},
                          1.0)[0] == doctest::Approx(1.5));

  CHECK_THROWS_AS(z_update_central({}, {}, 1.0), std::invalid_argument);
}

TEST_CASE("y update") {
  CHECK(y_update(scalar_vec(1.0), scalar_vec(1.0), scalar_vec(0.7), 3.0)[0] ==
        0.7);
  CHECK(y_update(scalar_vec(2.0), scalar_vec(0.0), scalar_vec(0.0), 1.0)[0] ==
        2.0);
  CHECK(y_update(scalar_vec(4.0), scalar_vec(2.0), scalar_vec(1.0), 0.5)[0] ==
        doctest::Approx(2.0));
}

TEST_CASE("topology") {
  const auto path = Topology::path(3);
  CHECK(path.connected());
  CHECK(path.neighborhood(0) == std::vector<int>{0, 1});
  CHECK(path.neighborhood(1) == std::vector<int>{0, 1, 2});

  const auto lonely = Topology::isolated(4);
  CHECK_FALSE(lonely.connected());
  CHECK(lonely.neighborhood(2) == std::vector<int>{2});

  CHECK_THROWS_AS(Topology(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Topology(3, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("consensus on scalar objectives") {
  AdmmConfig config;

  const auto single = run_consensus({AgentObjective::scalar(7.5)},
                                    Topology::complete(1), config);
  CHECK(single.converged);
  CHECK(single.solution[0] == doctest::Approx(7.5).epsilon(1e-8));

  std::vector<AgentObjective> five;
  for (double c = 1.0; c <= 5.0; c += 1.0) five.push_back(AgentObjective::scalar(c));
  const auto central = run_consensus(five, Topology::complete(5), config);
  CHECK(central.converged);
  CHECK(central.iterations <= 500);
  CHECK(central.solution[0] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("consensus matches the stacked least-squares oracle") {
  std::mt19937_64 rng(15);
  std::vector<AgentObjective> objectives;
  const int n = 5;
  for (int i = 0; i < 10; ++i) {
    const Eigen::MatrixXd b_mat = random_gaussian(rng, 8, n);
    const Eigen::VectorXd b_vec = random_gaussian(rng, 8, 1);
    objectives.push_back(AgentObjective::quadratic(b_mat, b_vec));
  }
  AdmmConfig config;
  const auto result = run_consensus(objectives, Topology::complete(10), config);
  CHECK(result.converged);
  const Eigen::VectorXd oracle = stacked_solution(objectives);
  CHECK((result.solution - oracle).norm() <= 1e-6 * oracle.norm());
}

TEST_CASE("central mode solves random well-conditioned instances") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n_dist(1, 10);
  std::uniform_int_distribution<int> agents_dist(1, 20);
  std::uniform_real_distribution<double> sv_dist(1.0, 2.0);
  // per-agent blocks with singular values in [1, 2]
  const auto conditioned = [&](int rows, int cols) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> left(
        random_gaussian(rng, rows, rows));
    const Eigen::HouseholderQR<Eigen::MatrixXd> right(
        random_gaussian(rng, cols, cols));
    Eigen::MatrixXd sv = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < cols; ++i) sv(i, i) = sv_dist(rng);
    return Eigen::MatrixXd(left.householderQ() * sv *
                           Eigen::MatrixXd(right.householderQ()).transpose());
  };
  for (int trial = 0; trial < 8; ++trial) {
    const int n = n_dist(rng);
    const int agents = agents_dist(rng);
    std::vector<AgentObjective> objectives;
    for (int i = 0; i < agents; ++i) {
      objectives.push_back(AgentObjective::quadratic(
          conditioned(n + 2, n), random_gaussian(rng, n + 2, 1)));
    }
    AdmmConfig config;
    const auto result =
        run_consensus(objectives, Topology::complete(agents), config);
    CHECK(result.converged);
    CHECK(result.iterations <= 500);
    const Eigen::VectorXd oracle = stacked_solution(objectives);
    CHECK((result.solution - oracle).norm() <= 1e-6 * oracle.norm());
  }
}

TEST_CASE("complete-graph neighbor mode tracks central mode") {
  std::mt19937_64 rng(16);
  std::vector<AgentObjective> objectives;
  for (int i = 0; i < 6; ++i) {
    objectives.push_back(AgentObjective::quadratic(random_gaussian(rng, 4, 3),
                                                   random_gaussian(rng, 4, 1)));
  }
  AdmmConfig central_cfg;
  central_cfg.max_iters = 60;
  AdmmConfig neighbor_cfg = central_cfg;
  neighbor_cfg.mode = AdmmMode::kNeighbor;

  const auto topo = Topology::complete(6);
  const auto central = run_consensus(objectives, topo, central_cfg);
  const auto neighbor = run_consensus(objectives, topo, neighbor_cfg);

  REQUIRE(central.state.trace.size() == neighbor.state.trace.size());
  for (std::size_t k = 0; k < central.state.trace.size(); ++k) {
    CHECK(central.state.trace[k].primal_residual ==
          doctest::Approx(neighbor.state.trace[k].primal_residual)
              .epsilon(1e-12));
  }
  for (int i = 0; i < 6; ++i) {
    CHECK((central.state.local_x[i] - neighbor.state.local_x[i]).norm() <
          1e-12);
    CHECK((central.state.local_z[0] - neighbor.state.local_z[i]).norm() <
          1e-12);
  }
  CHECK(neighbor.disagreement < 1e-12);
}

TEST_CASE("neighbor mode reports disagreement on sparse graphs") {
  std::vector<AgentObjective> objectives = {AgentObjective::scalar(0.0),
                                            AgentObjective::scalar(3.0),
                                            AgentObjective::scalar(6.0)};
  AdmmConfig config;
  config.mode = AdmmMode::kNeighbor;
  config.max_iters = 200;
  const auto result = run_consensus(objectives, Topology::path(3), config);
  CHECK(result.disagreement >= 0.0);
  CHECK(result.state.local_z.size() == 3);
}

TEST_CASE("updates are deterministic") {
  std::mt19937_64 rng(17);
  std::vector<AgentObjective> objectives;
  for (int i = 0; i < 4; ++i) {
    objectives.push_back(AgentObjective::quadratic(random_gaussian(rng, 3, 2),
                                                   random_gaussian(rng, 3, 1)));
  }
  AdmmConfig config;
  config.max_iters = 40;
  const auto a = run_consensus(objectives, Topology::path(4), config);
  const auto b = run_consensus(objectives, Topology::path(4), config);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.state.local_x[i] == b.state.local_x[i]);
    CHECK(a.state.local_y[i] == b.state.local_y[i]);
  }
  CHECK(a.solution == b.solution);
}

TEST_CASE("fixed point persists") {
  // all objectives share the minimizer z*, duals start at zero
  Eigen::MatrixXd b_mat(2, 2);
  b_mat << 1.0, 0.0, 0.0, 2.0;
  Eigen::VectorXd z_star(2);
  z_star << 0.5, -1.5;
  const Eigen::VectorXd b_vec = b_mat * z_star;
  const auto obj = AgentObjective::quadratic(b_mat, b_vec);

  const double mu = 1.0;
  const Eigen::VectorXd y0 = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd x1 = x_update(obj, z_star, y0, mu);
  CHECK((x1 - z_star).norm() < 1e-12);
  const Eigen::VectorXd z1 = z_update_central({x1, x1}, {y0, y0}, mu);
  CHECK((z1 - z_star).norm() < 1e-12);
  const Eigen::VectorXd y1 = y_update(x1, z1, y0, mu);
  CHECK(y1.norm() < 1e-12);
}

TEST_CASE("config and input validation") {
  AdmmConfig config;
  config.mu = 0.0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);

  std::vector<AgentObjective> mixed = {
      AgentObjective::scalar(1.0),
      AgentObjective::quadratic(Eigen::MatrixXd::Ones(2, 3),
                                Eigen::VectorXd::Ones(2))};
  CHECK_THROWS_AS(run_consensus(mixed, Topology::complete(2), AdmmConfig{}),
                  std::invalid_argument);
}
