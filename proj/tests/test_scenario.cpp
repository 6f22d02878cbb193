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

#include <algorithm>
#include <cmath>
#include <set>

#include "crowdsense/scenario.hpp"

using namespace crowdsense;

namespace {

// Small, fast configuration used by most cases here.
ScenarioConfig small_config() {
  ScenarioConfig cfg;
  cfg.corridors = 3;
  cfg.hops = 5;
  cfg.slots = 24;
  cfg.rank = 2;
  cfg.crowdsource = CrowdsourceModel::with_dishonest(8, 1);
  cfg.crowdsource.sampling_rate = 0.6;
  cfg.crowdsource.noise_std = 0.02;
  cfg.crowdsource.anomaly_rate = 0.3;
  cfg.crowdsource.anomaly_magnitude = 10.0;
  cfg.drivers = 4;
  cfg.learn_horizon = 2500;
  cfg.outage_eta = 40.0;
  return cfg;
}

}  // namespace

TEST_CASE("corridor networks are valid and sized as requested") {
  const auto net = RoadNetwork::corridors(1, 3, 10);
  CHECK(net.links.size() == 30);
  CHECK(net.od_pairs.size() == 1);
  CHECK(net.od_pairs[0].routes.size() == 3);
  net.check_valid();

  const auto two = RoadNetwork::corridors(2, 2, 4);
  CHECK(two.links.size() == 16);
  CHECK(two.od_pairs.size() == 2);
  two.check_valid();

  // route cap applies
  const auto capped = RoadNetwork::corridors(1, 6, 2, 1.0, 0.1, 4);
  CHECK(capped.od_pairs[0].routes.size() == 4);
}

TEST_CASE("ground truth is positive with the requested rank") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto truth = generate_ground_truth(25, 40, 2, seed);
    CHECK(truth.values.minCoeff() >= 1.0);
    const Eigen::VectorXd sv =
        Eigen::BDCSVD<Eigen::MatrixXd>(truth.values).singularValues();
    const int rank =
        static_cast<int>((sv.array() > 1e-6 * sv.maxCoeff()).count());
    CHECK(rank == 2);
  }

  // rank one: all columns proportional
  const auto flat = generate_ground_truth(10, 12, 1, 7);
  for (int c = 1; c < 12; ++c) {
    const double ratio = flat.values(0, c) / flat.values(0, 0);
    CHECK((flat.values.col(c) - ratio * flat.values.col(0)).norm() < 1e-9);
  }

  CHECK_THROWS_AS(generate_ground_truth(5, 5, 6, 0), std::invalid_argument);
}

TEST_CASE("observation model") {
  const auto truth = generate_ground_truth(20, 20, 2, 3);

  CrowdsourceModel clean = CrowdsourceModel::with_dishonest(4, 0);
  clean.sampling_rate = 1.0;
  clean.noise_std = 0.0;
  clean.seed = 1;
  const auto full = observe(truth, clean);
  CHECK(full.mask.is_full());
  CHECK((full.observed - truth.values).norm() == 0.0);
  CHECK(full.anomaly_support.empty());

  // binomial concentration of the mask size at rate 0.3 on 100x100
  const auto big = generate_ground_truth(100, 100, 2, 4);
  CrowdsourceModel partial = CrowdsourceModel::with_dishonest(4, 0);
  partial.sampling_rate = 0.3;
  partial.seed = 5;
  const auto obs = observe(big, partial);
  const double expected = 3000.0;
  const double sigma = std::sqrt(10000 * 0.3 * 0.7);
  CHECK(std::abs(static_cast<double>(obs.mask.size()) - expected) <=
        3.0 * sigma);

  // anomalies only on observed entries, only from dishonest contributors
  CrowdsourceModel dirty = CrowdsourceModel::with_dishonest(5, 2);
  dirty.sampling_rate = 0.5;
  dirty.anomaly_rate = 0.3;
  dirty.seed = 6;
  const auto corrupted = observe(truth, dirty);
  CHECK(!corrupted.anomaly_support.empty());
  const auto& entries = corrupted.mask.entries();
  for (const auto& bad : corrupted.anomaly_support) {
    CHECK(std::binary_search(entries.begin(), entries.end(), bad));
  }
  CHECK(corrupted.contributor_of.size() == corrupted.mask.size());
}

TEST_CASE("estimation recovers clean full observations") {
  const auto truth = generate_ground_truth(20, 25, 2, 11);
  CrowdsourceModel clean = CrowdsourceModel::with_dishonest(3, 0);
  clean.sampling_rate = 1.0;
  clean.noise_std = 0.0;
  clean.seed = 2;
  const auto obs = observe(truth, clean);
  auto solver = SolverConfig::for_masked(obs.observed, obs.mask);
  solver.rel_tol = 1e-9;
  const auto est = estimate_traffic(obs.observed, obs.mask, solver);
  CHECK((est.low_rank - truth.values).norm() <= 1e-6 * truth.values.norm());
}

TEST_CASE("estimation under the desk-scale crowdsourcing model") {
  const auto truth = generate_ground_truth(30, 60, 2, 21);
  CrowdsourceModel model = CrowdsourceModel::with_dishonest(10, 3);
  model.sampling_rate = 0.5;
  model.noise_std = 0.05;
  model.anomaly_rate = 0.1;
  model.anomaly_magnitude = 10.0;
  model.seed = 22;
  const auto obs = observe(truth, model);

  auto solver = SolverConfig::for_masked(obs.observed, obs.mask);
  solver.epsilon = model.noise_std * std::sqrt(static_cast<double>(obs.mask.size()));
  const auto est = estimate_traffic(obs.observed, obs.mask, solver);
  CHECK((est.low_rank - truth.values).norm() <= 0.05 * truth.values.norm());

  // planted anomaly support is mostly recovered
  const double cut = 1e-3 * obs.observed.cwiseAbs().maxCoeff();
  int hit = 0;
  for (const auto& [r, c] : obs.anomaly_support) {
    if (std::abs(est.sparse(r, c)) > cut) ++hit;
  }
  CHECK(static_cast<double>(hit) >=
        0.9 * static_cast<double>(obs.anomaly_support.size()));
}

TEST_CASE("outlier contributor flagging") {
  const auto truth = generate_ground_truth(20, 30, 2, 31);
  CrowdsourceModel model = CrowdsourceModel::with_dishonest(6, 2);
  model.sampling_rate = 0.7;
  model.noise_std = 0.02;
  model.anomaly_rate = 0.25;
  model.anomaly_magnitude = 12.0;
  model.seed = 32;
  const auto obs = observe(truth, model);

  // zero sparse estimate: nothing flagged
  const Eigen::MatrixXd no_sparse =
      Eigen::MatrixXd::Zero(truth.values.rows(), truth.values.cols());
  CHECK(detect_outlier_contributors(no_sparse, obs, model.contributors, 0.5)
            .empty());

  auto solver = SolverConfig::for_masked(obs.observed, obs.mask);
  solver.epsilon =
      model.noise_std * std::sqrt(static_cast<double>(obs.mask.size()));
  const auto est = estimate_traffic(obs.observed, obs.mask, solver);
  const auto flagged =
      detect_outlier_contributors(est.sparse, obs, model.contributors, 0.1);
  // honest contributors stay clean at tau = 0.1; the dishonest two are caught
  CHECK(flagged == std::vector<int>{4, 5});
}

TEST_CASE("route game: single driver takes a shortest path") {
  const auto net = RoadNetwork::corridors(1, 3, 4);
  const auto truth = generate_ground_truth(12, 8, 2, 41);
  const auto rg = build_route_game(net, truth.values, 1, 3);
  CHECK(rg.game.base.num_players == 1);
  CHECK(rg.game.neighbors[0].empty());

  // best response = cheapest route under the given column
  const int n_routes = rg.game.base.action_counts[0];
  double best_cost = 1e300;
  int best_route = -1;
  for (int a = 0; a < n_routes; ++a) {
    double cost = 0.0;
    for (int e : rg.driver_routes[0][a]) {
      cost += truth.values(e, 3) * (1.0 + net.links[e].congestion_slope);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_route = a;
    }
  }
  const auto ne = enumerate_pure_nash(rg.game.base);
  REQUIRE(ne.size() == 1);
  CHECK(ne[0][0] == best_route);
}

TEST_CASE("route game: two drivers on disjoint equal-cost routes") {
  // two corridors with identical times: both split assignments are NE
  const auto net = RoadNetwork::corridors(1, 2, 3);
  Eigen::MatrixXd flat_times = Eigen::MatrixXd::Ones(6, 4);
  const auto rg = build_route_game(net, flat_times, 2, 1);
  const auto ne = enumerate_pure_nash(rg.game.base);
  const std::vector<ActionProfile> split = {{0, 1}, {1, 0}};
  for (const auto& p : split) {
    CHECK(std::find(ne.begin(), ne.end(), p) != ne.end());
  }
}

TEST_CASE("route game: zero slopes decouple the drivers") {
  const auto net = RoadNetwork::corridors(1, 2, 3, 1.0, 0.0);
  Eigen::MatrixXd times(6, 2);
  times << 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2;  // corridor 1 dearer
  const auto rg = build_route_game(net, times, 3, 0);
  // neighborhoods still derive from shared links
  CHECK(rg.game.neighbors[0].size() == 2);
  // with no congestion everyone sits on the cheap corridor
  const auto ne = enumerate_pure_nash(rg.game.base);
  REQUIRE(ne.size() == 1);
  CHECK(ne[0] == ActionProfile{0, 0, 0});
}

TEST_CASE("route games on disjoint components have local interactions") {
  const auto net = RoadNetwork::corridors(2, 2, 3);
  const auto truth = generate_ground_truth(12, 6, 2, 51);
  const auto rg = build_route_game(net, truth.values, 4, 2);
  // drivers alternate components: 0,2 on component A; 1,3 on component B
  CHECK(rg.game.neighbors[0] == std::vector<int>{2});
  CHECK(rg.game.neighbors[1] == std::vector<int>{3});

  // perturbing a player outside J_n never changes u_n
  ActionProfile profile = {0, 0, 1, 1};
  ActionProfile flipped = profile;
  flipped[1] ^= 1;
  CHECK(rg.game.base.utility(0, profile) == rg.game.base.utility(0, flipped));
}

TEST_CASE("desk-scale congestion games admit a pure NE") {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto net = RoadNetwork::corridors(1, 3, 4);
    const auto truth = generate_ground_truth(12, 10, 2, seed);
    const auto rg = build_route_game(net, truth.values, 5, 4);
    CHECK_FALSE(enumerate_pure_nash(rg.game.base).empty());
  }
}

TEST_CASE("end-to-end scenario: degenerate clean case") {
  ScenarioConfig cfg = small_config();
  cfg.crowdsource = CrowdsourceModel::with_dishonest(4, 0);
  cfg.crowdsource.sampling_rate = 1.0;
  cfg.crowdsource.noise_std = 0.0;
  cfg.crowdsource.anomaly_rate = 0.0;
  cfg.drivers = 1;
  const auto report = run_scenario(cfg, 7);

  CHECK(report.recovery_relative_error <= 1e-6);
  CHECK(report.flagged_contributors.empty());
  CHECK(report.flagging_precision == 1.0);
  CHECK(report.flagging_recall == 1.0);
  CHECK(report.learned_profile_is_nash);
  CHECK(report.qod.completeness == 1.0);
  CHECK(report.qod.accuracy == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("end-to-end scenario: reports are deterministic") {
  const ScenarioConfig cfg = small_config();
  const auto a = run_scenario(cfg, 123);
  const auto b = run_scenario(cfg, 123);
  CHECK(a.to_json() == b.to_json());
  const auto c = run_scenario(cfg, 124);
  CHECK(a.to_json() != c.to_json());
  // timings exist but stay out of the canonical serialization
  CHECK(!a.stage_seconds.empty());
  CHECK(a.to_json().find("stage_seconds") == std::string::npos);
  CHECK(a.to_json(true).find("stage_seconds") != std::string::npos);
}

TEST_CASE("recovery error improves with sampling rate (statistical)") {
  ScenarioConfig cfg = small_config();
  cfg.learn_horizon = 50;  // learning is irrelevant here, keep it cheap
  double mean_err[3] = {0.0, 0.0, 0.0};
  const double rates[3] = {0.2, 0.4, 0.8};
  const int seeds = 30;
  for (int r = 0; r < 3; ++r) {
    cfg.crowdsource.sampling_rate = rates[r];
    for (int s = 0; s < seeds; ++s) {
      mean_err[r] +=
          run_scenario(cfg, 9000 + s).recovery_relative_error / seeds;
    }
  }
  CHECK(mean_err[1] <= mean_err[0]);
  CHECK(mean_err[2] <= mean_err[1]);
}

TEST_CASE("scenario config validation") {
  ScenarioConfig cfg = small_config();
  cfg.rank = 0;
  CHECK_THROWS_AS(run_scenario(cfg, 1), std::invalid_argument);
  cfg = small_config();
  cfg.learn_step = 1.5;
  CHECK_THROWS_AS(run_scenario(cfg, 1), std::invalid_argument);
  cfg = small_config();
  cfg.game_slot = 500;
  CHECK_THROWS_AS(run_scenario(cfg, 1), std::invalid_argument);
}
