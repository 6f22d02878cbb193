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

#include "crowdsense/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "crowdsense/error.hpp"

namespace crowdsense {

namespace {

// splitmix64-style stream derivation from the run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr double kTruthFloor = 1.0;
constexpr double kTruthAmplitude = 3.0;

}  // namespace

void RoadNetwork::check_valid() const {
  if (num_junctions < 1) {
    throw std::invalid_argument("RoadNetwork: no junctions");
  }
  for (const auto& link : links) {
    if (link.from < 0 || link.from >= num_junctions || link.to < 0 ||
        link.to >= num_junctions) {
      throw std::invalid_argument("RoadNetwork: link endpoint out of range");
    }
    if (!(link.free_flow_time > 0.0)) {
      throw std::invalid_argument("RoadNetwork: free-flow time must be > 0");
    }
    if (link.congestion_slope < 0.0) {
      throw std::invalid_argument("RoadNetwork: congestion slope must be >= 0");
    }
  }
  for (const auto& od : od_pairs) {
    for (const auto& route : od.routes) {
      int at = od.origin;
      for (int link_id : route) {
        if (link_id < 0 || link_id >= static_cast<int>(links.size())) {
          throw std::invalid_argument("RoadNetwork: route uses unknown link");
        }
        if (links[link_id].from != at) {
          throw std::invalid_argument("RoadNetwork: route is not a path");
        }
        at = links[link_id].to;
      }
      if (at != od.destination) {
        throw std::invalid_argument(
            "RoadNetwork: route does not reach the destination");
      }
    }
  }
}

void enumerate_routes(RoadNetwork& network, int max_routes_per_pair,
                      int path_cap) {
  if (max_routes_per_pair < 1) {
    throw std::invalid_argument("enumerate_routes: need at least one route");
  }
  std::vector<std::vector<int>> outgoing(network.num_junctions);
  for (int e = 0; e < static_cast<int>(network.links.size()); ++e) {
    outgoing[network.links[e].from].push_back(e);
  }
  for (auto& od : network.od_pairs) {
    std::vector<std::vector<int>> found;
    std::vector<int> path;
    std::vector<bool> visited(network.num_junctions, false);
    int explored = 0;

    const std::function<void(int)> dfs = [&](int junction) {
      if (junction == od.destination) {
        found.push_back(path);
        if (static_cast<int>(found.size()) > path_cap) {
          throw std::invalid_argument(
              "enumerate_routes: simple-path count exceeds the cap");
        }
        return;
      }
      visited[junction] = true;
      for (int e : outgoing[junction]) {
        const int next = network.links[e].to;
        if (visited[next]) continue;
        if (++explored > 100 * path_cap) {
          throw std::invalid_argument("enumerate_routes: graph too large");
        }
        path.push_back(e);
        dfs(next);
        path.pop_back();
      }
      visited[junction] = false;
    };
    dfs(od.origin);

    const auto free_flow = [&](const std::vector<int>& route) {
      double acc = 0.0;
      for (int e : route) acc += network.links[e].free_flow_time;
      return acc;
    };
    std::stable_sort(found.begin(), found.end(),
                     [&](const auto& a, const auto& b) {
                       return free_flow(a) < free_flow(b);
                     });
    if (static_cast<int>(found.size()) > max_routes_per_pair) {
      found.resize(max_routes_per_pair);
    }
    od.routes = std::move(found);
  }
}

RoadNetwork RoadNetwork::corridors(int components, int corridors, int hops,
                                   double free_flow_time,
                                   double congestion_slope,
                                   int max_routes_per_pair) {
  if (components < 1 || corridors < 1 || hops < 1) {
    throw std::invalid_argument(
        "RoadNetwork::corridors: counts must be positive");
  }
  RoadNetwork net;
  const int junctions_per = 2 + corridors * (hops - 1);
  net.num_junctions = components * junctions_per;
  for (int comp = 0; comp < components; ++comp) {
    const int base = comp * junctions_per;
    const int origin = base;
    const int destination = base + junctions_per - 1;
    for (int c = 0; c < corridors; ++c) {
      int at = origin;
      for (int h = 0; h < hops; ++h) {
        const int next = h + 1 == hops
                             ? destination
                             : base + 1 + c * (hops - 1) + h;
        net.links.push_back({at, next, free_flow_time, congestion_slope});
        at = next;
      }
    }
    net.od_pairs.push_back({origin, destination, {}});
  }
  enumerate_routes(net, max_routes_per_pair);
  net.check_valid();
  return net;
}

TrafficMatrix generate_ground_truth(int links, int slots, int rank,
                                    std::uint64_t seed) {
  if (links < 1 || slots < 1) {
    throw std::invalid_argument("generate_ground_truth: empty matrix");
  }
  if (rank < 1 || rank > std::min(links, slots)) {
    throw std::invalid_argument(
        "generate_ground_truth: rank must lie in [1, min(links, slots)]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // First factor pair carries a positive floor: column 0 of the left factor
  // is at least kTruthFloor and row 0 of the right factor is all ones, so
  // every entry is >= kTruthFloor while the product keeps rank `rank`.
  Eigen::MatrixXd left(links, rank);
  Eigen::MatrixXd right(rank, slots);
  for (int i = 0; i < links; ++i) {
    left(i, 0) = kTruthFloor + kTruthAmplitude * unit(rng);
  }
  for (int k = 1; k < rank; ++k) {
    for (int i = 0; i < links; ++i) {
      left(i, k) = kTruthAmplitude * unit(rng);
    }
  }
  right.row(0).setOnes();
  for (int k = 1; k < rank; ++k) {
    for (int j = 0; j < slots; ++j) {
      right(k, j) = unit(rng);
    }
  }
  return {left * right, rank};
}

CrowdsourceModel CrowdsourceModel::with_dishonest(int contributors,
                                                  int dishonest) {
  if (contributors < 1 || dishonest < 0 || dishonest > contributors) {
    throw std::invalid_argument(
        "CrowdsourceModel: bad contributor/dishonest counts");
  }
  CrowdsourceModel model;
  model.contributors = contributors;
  model.honest.assign(contributors, true);
  for (int i = contributors - dishonest; i < contributors; ++i) {
    model.honest[i] = false;
  }
  return model;
}

void CrowdsourceModel::check_valid() const {
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    throw std::invalid_argument("CrowdsourceModel: sampling_rate outside (0, 1]");
  }
  if (noise_std < 0.0) {
    throw std::invalid_argument("CrowdsourceModel: noise_std must be >= 0");
  }
  if (!(anomaly_rate >= 0.0 && anomaly_rate < 1.0)) {
    throw std::invalid_argument("CrowdsourceModel: anomaly_rate outside [0, 1)");
  }
  if (!(anomaly_magnitude > 0.0)) {
    throw std::invalid_argument("CrowdsourceModel: anomaly_magnitude must be > 0");
  }
  if (contributors < 1 ||
      static_cast<int>(honest.size()) != contributors) {
    throw std::invalid_argument(
        "CrowdsourceModel: need one honesty flag per contributor");
  }
}

Observation observe(const TrafficMatrix& truth, const CrowdsourceModel& model) {
  model.check_valid();
  const auto rows = truth.values.rows();
  const auto cols = truth.values.cols();
  std::mt19937_64 rng(model.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, model.contributors - 1);

  Eigen::MatrixXd observed = Eigen::MatrixXd::Zero(rows, cols);
  std::vector<ObservationMask::Entry> entries;
  std::vector<ObservationMask::Entry> anomalies;
  std::vector<int> contributor_of;

  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (unit(rng) >= model.sampling_rate) continue;
      double value = truth.values(r, c) + model.noise_std * gauss(rng);
      const int who = pick(rng);
      if (!model.honest[who] && unit(rng) < model.anomaly_rate) {
        value += (unit(rng) < 0.5 ? -1.0 : 1.0) * model.anomaly_magnitude;
        anomalies.emplace_back(r, c);
      }
      observed(r, c) = value;
      entries.emplace_back(r, c);
      contributor_of.push_back(who);
    }
  }
  // entries were produced row-major, which is the mask's sorted order, so
  // contributor_of stays parallel.
  return {std::move(observed),
          ObservationMask(rows, cols, std::move(entries)),
          std::move(anomalies), std::move(contributor_of)};
}

Decomposition estimate_traffic(const Eigen::MatrixXd& observed,
                               const ObservationMask& mask,
                               const SolverConfig& config) {
  return robust_completion(observed, mask, config);
}

std::vector<int> detect_outlier_contributors(
    const Eigen::MatrixXd& sparse_estimate, const Observation& observation,
    int contributors, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument(
        "detect_outlier_contributors: tau outside (0, 1)");
  }
  if (contributors < 1) {
    throw std::invalid_argument("detect_outlier_contributors: no contributors");
  }
  const auto& entries = observation.mask.entries();
  if (entries.size() != observation.contributor_of.size()) {
    throw std::invalid_argument(
        "detect_outlier_contributors: attribution does not match the mask");
  }
  const double scale = observation.observed.cwiseAbs().maxCoeff();
  const double threshold = 1e-3 * scale;

  std::vector<int> total(contributors, 0);
  std::vector<int> anomalous(contributors, 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const int who = observation.contributor_of[i];
    if (who < 0 || who >= contributors) {
      throw std::invalid_argument(
          "detect_outlier_contributors: contributor id out of range");
    }
    ++total[who];
    const auto& [r, c] = entries[i];
    if (std::abs(sparse_estimate(r, c)) > threshold) ++anomalous[who];
  }
  std::vector<int> flagged;
  for (int who = 0; who < contributors; ++who) {
    if (total[who] == 0) continue;
    if (static_cast<double>(anomalous[who]) / total[who] > tau) {
      flagged.push_back(who);
    }
  }
  return flagged;
}

namespace {

struct RouteGameData {
  std::vector<std::vector<std::vector<int>>> routes;  // [driver][action]
  Eigen::VectorXd link_time;
  Eigen::VectorXd link_slope;
  int num_links = 0;

  double route_cost(int driver, const ActionProfile& profile) const {
    std::vector<int> load(num_links, 0);
    for (std::size_t m = 0; m < routes.size(); ++m) {
      for (int e : routes[m][profile[m]]) ++load[e];
    }
    double cost = 0.0;
    for (int e : routes[driver][profile[driver]]) {
      cost += link_time[e] * (1.0 + link_slope[e] * load[e]);
    }
    return cost;
  }
};

}  // namespace

RouteGame build_route_game(const RoadNetwork& network,
                           const Eigen::MatrixXd& estimated_times, int drivers,
                           int slot) {
  network.check_valid();
  if (drivers < 1) {
    throw std::invalid_argument("build_route_game: need at least one driver");
  }
  if (estimated_times.rows() != static_cast<Eigen::Index>(network.links.size())) {
    throw std::invalid_argument(
        "build_route_game: estimate has one row per link");
  }
  if (slot < 0 || slot >= estimated_times.cols()) {
    throw std::invalid_argument("build_route_game: slot out of range");
  }
  if (network.od_pairs.empty()) {
    throw std::invalid_argument("build_route_game: network has no OD pairs");
  }

  auto data = std::make_shared<RouteGameData>();
  data->num_links = static_cast<int>(network.links.size());
  data->link_time = estimated_times.col(slot);
  data->link_slope.resize(data->num_links);
  for (int e = 0; e < data->num_links; ++e) {
    data->link_slope[e] = network.links[e].congestion_slope;
  }

  RouteGame rg;
  rg.driver_od.resize(drivers);
  rg.driver_routes.resize(drivers);
  for (int n = 0; n < drivers; ++n) {
    const int od = n % static_cast<int>(network.od_pairs.size());
    rg.driver_od[n] = od;
    if (network.od_pairs[od].routes.empty()) {
      throw std::invalid_argument("build_route_game: driver with no route");
    }
    rg.driver_routes[n] = network.od_pairs[od].routes;
  }
  data->routes = rg.driver_routes;

  rg.game.base.num_players = drivers;
  rg.game.base.action_counts.resize(drivers);
  for (int n = 0; n < drivers; ++n) {
    rg.game.base.action_counts[n] =
        static_cast<int>(rg.driver_routes[n].size());
  }
  rg.game.base.utility = [data](int player, const ActionProfile& profile) {
    return -data->route_cost(player, profile);
  };

  // Interaction sets from potential link sharing over any route pair, so
  // neighborhoods stay fixed during learning.
  std::vector<std::set<int>> link_use(drivers);
  for (int n = 0; n < drivers; ++n) {
    for (const auto& route : rg.driver_routes[n]) {
      link_use[n].insert(route.begin(), route.end());
    }
  }
  rg.game.neighbors.resize(drivers);
  for (int n = 0; n < drivers; ++n) {
    for (int m = 0; m < drivers; ++m) {
      if (m == n) continue;
      const bool shares = std::any_of(
          link_use[n].begin(), link_use[n].end(),
          [&](int e) { return link_use[m].count(e) > 0; });
      if (shares) rg.game.neighbors[n].push_back(m);
    }
  }
  rg.game.check_valid();

  // Payoff bounds over all loads in [1, drivers], for reward normalization.
  double lower_cost = std::numeric_limits<double>::infinity();
  double upper_cost = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < drivers; ++n) {
    for (const auto& route : rg.driver_routes[n]) {
      double lo = 0.0;
      double hi = 0.0;
      for (int e : route) {
        const double t = data->link_time[e];
        const double one = t * (1.0 + data->link_slope[e]);
        const double full = t * (1.0 + data->link_slope[e] * drivers);
        lo += std::min(one, full);
        hi += std::max(one, full);
      }
      lower_cost = std::min(lower_cost, lo);
      upper_cost = std::max(upper_cost, hi);
    }
  }
  rg.utility_lower = -upper_cost;
  rg.utility_upper = -lower_cost;
  if (!(rg.utility_lower < rg.utility_upper)) {
    rg.utility_lower -= 0.5;
    rg.utility_upper += 0.5;
  }
  return rg;
}

CrowdsourceModel ScenarioConfig::reference_crowdsource() {
  CrowdsourceModel model = CrowdsourceModel::with_dishonest(10, 1);
  model.sampling_rate = 0.5;
  model.noise_std = 0.05;
  model.anomaly_rate = 0.3;
  model.anomaly_magnitude = 10.0;
  return model;
}

void ScenarioConfig::check_valid() const {
  if (components < 1 || corridors < 1 || hops < 1) {
    throw std::invalid_argument("ScenarioConfig: bad network shape");
  }
  if (!(free_flow_time > 0.0) || congestion_slope < 0.0) {
    throw std::invalid_argument("ScenarioConfig: bad link parameters");
  }
  if (max_routes_per_pair < 1) {
    throw std::invalid_argument("ScenarioConfig: max_routes_per_pair < 1");
  }
  if (slots < 1) throw std::invalid_argument("ScenarioConfig: slots < 1");
  const int links = components * corridors * hops;
  if (rank < 1 || rank > std::min(links, slots)) {
    throw std::invalid_argument("ScenarioConfig: rank out of range");
  }
  crowdsource.check_valid();
  if (solver_max_iters < 1) {
    throw std::invalid_argument("ScenarioConfig: solver_max_iters < 1");
  }
  if (drivers < 1) throw std::invalid_argument("ScenarioConfig: drivers < 1");
  if (game_slot >= slots) {
    throw std::invalid_argument("ScenarioConfig: game_slot out of range");
  }
  if (!(learn_step > 0.0 && learn_step < 1.0)) {
    throw std::invalid_argument("ScenarioConfig: learn_step outside (0, 1)");
  }
  if (learn_horizon < 1) {
    throw std::invalid_argument("ScenarioConfig: learn_horizon < 1");
  }
  if (!(outlier_tau > 0.0 && outlier_tau < 1.0)) {
    throw std::invalid_argument("ScenarioConfig: outlier_tau outside (0, 1)");
  }
  if (report_delay_seconds < 0.0 || !(report_delay_scale > 0.0)) {
    throw std::invalid_argument("ScenarioConfig: bad report delay parameters");
  }
}

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(const std::string& name, Fn&& fn) -> decltype(fn()) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      sink_[name] = elapsed(start);
    } else {
      auto out = fn();
      sink_[name] = elapsed(start);
      return out;
    }
  }

 private:
  static double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }

  std::map<std::string, double>& sink_;
};

}  // namespace

ScenarioReport run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.check_valid();
  ScenarioReport report;
  report.seed = seed;
  StageTimer timer(report.stage_seconds);

  const RoadNetwork network = timer.run("network", [&] {
    return RoadNetwork::corridors(config.components, config.corridors,
                                  config.hops, config.free_flow_time,
                                  config.congestion_slope,
                                  config.max_routes_per_pair);
  });
  const int links = static_cast<int>(network.links.size());

  const TrafficMatrix truth = timer.run("ground_truth", [&] {
    return generate_ground_truth(links, config.slots, config.rank,
                                 mix_seed(seed, 1));
  });

  CrowdsourceModel model = config.crowdsource;
  model.seed = mix_seed(seed, 2);
  const Observation obs =
      timer.run("observe", [&] { return observe(truth, model); });

  SolverConfig solver = SolverConfig::for_masked(obs.observed, obs.mask);
  if (config.lambda > 0.0) solver.lambda = config.lambda;
  solver.epsilon = config.epsilon >= 0.0
                       ? config.epsilon
                       : model.noise_std * std::sqrt(static_cast<double>(
                                               obs.mask.size()));
  solver.max_iters = config.solver_max_iters;
  const Decomposition estimate = timer.run("recover", [&] {
    return estimate_traffic(obs.observed, obs.mask, solver);
  });
  report.recovery_converged = estimate.converged;
  report.recovery_iterations = estimate.iterations;
  report.recovery_relative_error =
      (estimate.low_rank - truth.values).norm() / truth.values.norm();

  timer.run("flag", [&] {
    report.flagged_contributors = detect_outlier_contributors(
        estimate.sparse, obs, model.contributors, config.outlier_tau);
    std::vector<int> dishonest;
    for (int who = 0; who < model.contributors; ++who) {
      if (!model.honest[who]) dishonest.push_back(who);
    }
    int true_positive = 0;
    for (int who : report.flagged_contributors) {
      if (!model.honest[who]) ++true_positive;
    }
    report.flagging_precision =
        report.flagged_contributors.empty()
            ? 1.0
            : static_cast<double>(true_positive) /
                  static_cast<double>(report.flagged_contributors.size());
    report.flagging_recall =
        dishonest.empty() ? 1.0
                          : static_cast<double>(true_positive) /
                                static_cast<double>(dishonest.size());
  });

  const int slot = config.game_slot >= 0 ? config.game_slot : config.slots / 2;
  const RouteGame route_game = timer.run("game", [&] {
    return build_route_game(network, estimate.low_rank, config.drivers, slot);
  });

  const LearningResult learned = timer.run("learn", [&] {
    LearnerConfig lc;
    lc.step_size = config.learn_step;
    lc.reward_min = route_game.utility_lower;
    lc.reward_max = route_game.utility_upper;
    lc.horizon = config.learn_horizon;
    lc.seed = mix_seed(seed, 3);
    return simulate_learning(route_game.game,
                             PayoffEnvironment::deterministic(), lc,
                             config.outage_eta);
  });
  report.learned_profile = learned.summary.final_profile;
  report.learning_converged = learned.summary.converged;
  report.learned_profile_is_nash =
      is_pure_nash(route_game.game.base, report.learned_profile);
  report.expected_travel_time.resize(config.drivers);
  for (int n = 0; n < config.drivers; ++n) {
    report.expected_travel_time[n] = -learned.summary.expected_payoff[n];
  }
  report.outage = learned.summary.outage;
  report.outage_eta = config.outage_eta;

  timer.run("score", [&] {
    const double age = timeliness(config.report_delay_seconds,
                                  config.report_delay_scale);
    report.qod.accuracy = 1.0 / (1.0 + report.recovery_relative_error);
    report.qod.truthfulness = report.flagging_precision;
    report.qod.completeness =
        completeness(static_cast<double>(obs.mask.size()),
                     static_cast<double>(links) * config.slots);
    report.qod.up_to_dateness = age;
    report.qod_score_value = qod_score(report.qod);

    std::set<int> route_links;
    for (const auto& od : network.od_pairs) {
      for (const auto& route : od.routes) {
        route_links.insert(route.begin(), route.end());
      }
    }
    std::set<int> observed_links;
    for (const auto& [r, c] : obs.mask.entries()) {
      observed_links.insert(static_cast<int>(r));
    }
    int covered = 0;
    for (int e : route_links) covered += observed_links.count(e) > 0 ? 1 : 0;
    report.qoi.quantity =
        route_links.empty()
            ? 1.0
            : static_cast<double>(covered) / static_cast<double>(route_links.size());
    report.qoi.precision = 1.0;  // synthetic data: everything gathered is relevant
    report.qoi.recall = 1.0;
    report.qoi.accuracy = report.qod.accuracy;
    report.qoi.detail = 1.0;
    report.qoi.timeliness = age;
    report.qoi.validity = report.flagging_precision;
    report.qoi_score_value = qoi_score(report.qoi);
  });

  return report;
}

std::string ScenarioReport::to_json(bool include_timings) const {
  nlohmann::json j;
  j["seed"] = seed;
  j["recovery_relative_error"] = recovery_relative_error;
  j["recovery_converged"] = recovery_converged;
  j["recovery_iterations"] = recovery_iterations;
  j["flagged_contributors"] = flagged_contributors;
  j["flagging_precision"] = flagging_precision;
  j["flagging_recall"] = flagging_recall;
  j["learned_profile"] = learned_profile;
  j["learned_profile_is_nash"] = learned_profile_is_nash;
  j["learning_converged"] = learning_converged;
  j["expected_travel_time"] = expected_travel_time;
  j["outage"] = outage;
  j["outage_eta"] = outage_eta;
  j["qod"] = {{"accuracy", qod.accuracy},
              {"truthfulness", qod.truthfulness},
              {"completeness", qod.completeness},
              {"up_to_dateness", qod.up_to_dateness}};
  j["qod_score"] = qod_score_value;
  j["qoi"] = {{"quantity", qoi.quantity},   {"precision", qoi.precision},
              {"recall", qoi.recall},       {"accuracy", qoi.accuracy},
              {"detail", qoi.detail},       {"timeliness", qoi.timeliness},
              {"validity", qoi.validity}};
  j["qoi_score"] = qoi_score_value;
  if (include_timings) {
    j["stage_seconds"] = stage_seconds;
  }
  return j.dump(2) + "\n";
}

}  // namespace crowdsense
