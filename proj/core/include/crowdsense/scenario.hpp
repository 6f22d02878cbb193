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
//
// End-to-end smart-traffic harness: synthesize a low-rank link-time matrix,
// push it through a crowdsourced observation model, recover it from the
// noisy, corrupted, partial data, flag anomalous contributors, let drivers
// learn route choices in the induced congestion game, and score the whole
// pipeline.

#ifndef CROWDSENSE_SCENARIO_HPP_
#define CROWDSENSE_SCENARIO_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crowdsense/games.hpp"
#include "crowdsense/lowrank.hpp"
#include "crowdsense/metrics.hpp"

namespace crowdsense {

struct RoadNetwork {
  struct Link {
    int from = 0;
    int to = 0;
    double free_flow_time = 1.0;   // > 0
    double congestion_slope = 0.0; // >= 0
  };
  struct OdPair {
    int origin = 0;
    int destination = 0;
    std::vector<std::vector<int>> routes;  // link-index paths
  };

  int num_junctions = 0;
  std::vector<Link> links;
  std::vector<OdPair> od_pairs;

  // `components` disjoint origin/destination bundles, each with `corridors`
  // parallel chains of `hops` links; routes are enumerated on construction.
  static RoadNetwork corridors(int components, int corridors, int hops,
                               double free_flow_time = 1.0,
                               double congestion_slope = 0.1,
                               int max_routes_per_pair = 4);

  void check_valid() const;
};

// K shortest simple paths per OD pair under free-flow times, by exhaustive
// enumeration (desk scale; throws past `path_cap` simple paths).
void enumerate_routes(RoadNetwork& network, int max_routes_per_pair = 4,
                      int path_cap = 10000);

// links x slots baseline travel times, entries positive, numerical rank
// equal to generator_rank by construction.
struct TrafficMatrix {
  Eigen::MatrixXd values;
  int generator_rank = 0;
};

TrafficMatrix generate_ground_truth(int links, int slots, int rank,
                                    std::uint64_t seed);

struct CrowdsourceModel {
  double sampling_rate = 0.5;     // (0, 1]
  double noise_std = 0.0;         // >= 0
  double anomaly_rate = 0.0;      // [0, 1), per dishonest-contributor entry
  double anomaly_magnitude = 10.0;  // > 0
  int contributors = 1;
  std::vector<bool> honest;       // size == contributors
  std::uint64_t seed = 0;

  static CrowdsourceModel with_dishonest(int contributors, int dishonest);
  void check_valid() const;
};

struct Observation {
  Eigen::MatrixXd observed;  // zeros off the mask
  ObservationMask mask;
  std::vector<ObservationMask::Entry> anomaly_support;
  // contributor id per mask entry, parallel to mask.entries()
  std::vector<int> contributor_of;
};

Observation observe(const TrafficMatrix& truth, const CrowdsourceModel& model);

// Recovery from the crowdsourced data; thin wrapper over robust_completion.
Decomposition estimate_traffic(const Eigen::MatrixXd& observed,
                               const ObservationMask& mask,
                               const SolverConfig& config);

// Flags contributors whose share of anomalous entries (|sparse| above
// 1e-3 * max|observed|) exceeds tau. Contributors with no entries are never
// flagged.
std::vector<int> detect_outlier_contributors(
    const Eigen::MatrixXd& sparse_estimate, const Observation& observation,
    int contributors, double tau);

// Route choice as a spatial congestion game: actions are routes, the cost
// of a route is the sum over its links of time * (1 + slope * load), and
// interaction neighborhoods are drivers that can share a link.
struct RouteGame {
  SpatialGame game;
  std::vector<int> driver_od;  // OD-pair index per driver
  std::vector<std::vector<std::vector<int>>> driver_routes;  // [driver][action]
  double utility_lower = 0.0;  // payoff normalization bounds
  double utility_upper = 0.0;
};

RouteGame build_route_game(const RoadNetwork& network,
                           const Eigen::MatrixXd& estimated_times, int drivers,
                           int slot);

// Defaults are the reference desk-scale setup: a 30-link corridor network,
// 60 slots of rank-2 ground truth, half the entries observed, one dishonest
// contributor in ten corrupting 30% of its entries (3% of all observations).
struct ScenarioConfig {
  // network
  int components = 1;
  int corridors = 3;
  int hops = 10;
  double free_flow_time = 1.0;
  double congestion_slope = 0.3;
  int max_routes_per_pair = 4;
  // ground truth
  int slots = 60;
  int rank = 2;
  // crowdsourcing
  CrowdsourceModel crowdsource = reference_crowdsource();
  // recovery; nonpositive values mean data-driven defaults
  double lambda = 0.0;
  double epsilon = -1.0;  // default: noise_std * sqrt(|mask|)
  int solver_max_iters = 1000;
  // route game and learning
  int drivers = 5;
  int game_slot = -1;  // default: slots / 2
  double learn_step = 0.02;
  int learn_horizon = 15000;
  double outage_eta = 100.0;  // travel-time exceedance threshold
  // outlier flagging
  double outlier_tau = 0.15;
  // report-stage timeliness (simulated data age, not wall clock)
  double report_delay_seconds = 1.0;
  double report_delay_scale = 60.0;

  static CrowdsourceModel reference_crowdsource();
  void check_valid() const;
};

struct ScenarioReport {
  std::uint64_t seed = 0;
  double recovery_relative_error = 0.0;
  bool recovery_converged = false;
  int recovery_iterations = 0;
  std::vector<int> flagged_contributors;
  double flagging_precision = 1.0;
  double flagging_recall = 1.0;
  ActionProfile learned_profile;
  bool learned_profile_is_nash = false;
  bool learning_converged = false;
  std::vector<double> expected_travel_time;  // per driver
  std::vector<double> outage;                // per driver, Pr{time > eta}
  double outage_eta = 0.0;
  QoDRecord qod;
  double qod_score_value = 0.0;
  QoIRecord qoi;
  double qoi_score_value = 0.0;
  // Wall clock per stage; kept out of the canonical JSON so reports are
  // byte-identical across reruns of the same seed.
  std::map<std::string, double> stage_seconds;

  std::string to_json(bool include_timings = false) const;
};

ScenarioReport run_scenario(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace crowdsense

#endif  // CROWDSENSE_SCENARIO_HPP_
