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

#include <chrono>

#include "commands.hpp"
#include "crowdsense/games.hpp"
#include "crowdsense/io.hpp"
#include "crowdsense/scenario.hpp"

namespace crowdsense::cli {

namespace {

PayoffEnvironment parse_environment(const nlohmann::json& spec) {
  check_keys(spec, {"kind", "width"}, "environment");
  const std::string kind = get_string(spec, "kind", "deterministic");
  if (kind == "deterministic") return PayoffEnvironment::deterministic();
  if (kind == "additive_uniform") {
    return PayoffEnvironment::additive_uniform(
        require_number(spec, "width", "environment"));
  }
  if (kind == "bernoulli_success") return PayoffEnvironment::bernoulli_success();
  throw std::invalid_argument(
      "environment kind must be deterministic, additive_uniform or "
      "bernoulli_success, got: " + kind);
}

}  // namespace

void run_game(RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  check_keys(ctx.config,
             {"game", "players", "actions", "corridors", "hops", "drivers",
              "congestion_slope", "slot", "environment", "learner"},
             "game config");
  const std::string kind = require_string(ctx.config, "game", "game config");

  LearnerConfig learner;
  double outage_eta = 0.0;
  if (ctx.config.contains("learner")) {
    const auto& spec = ctx.config["learner"];
    check_keys(spec,
               {"step_size", "horizon", "reward_min", "reward_max",
                "outage_eta"},
               "learner");
    learner.step_size = get_number(spec, "step_size", learner.step_size);
    learner.horizon = get_int(spec, "horizon", learner.horizon);
    learner.reward_min = get_number(spec, "reward_min", learner.reward_min);
    learner.reward_max = get_number(spec, "reward_max", learner.reward_max);
    outage_eta = get_number(spec, "outage_eta", 0.0);
  }
  learner.seed = ctx.seed;

  SpatialGame game;
  if (kind == "coordination") {
    game = make_coordination_game(get_int(ctx.config, "players", 2),
                                  get_int(ctx.config, "actions", 2));
  } else if (kind == "matching_pennies") {
    game = make_matching_pennies();
  } else if (kind == "congestion") {
    const int corridors = get_int(ctx.config, "corridors", 3);
    const int hops = get_int(ctx.config, "hops", 4);
    const int drivers = get_int(ctx.config, "drivers", 5);
    const double slope = get_number(ctx.config, "congestion_slope", 0.3);
    const auto network = RoadNetwork::corridors(1, corridors, hops, 1.0, slope);
    const auto truth =
        generate_ground_truth(static_cast<int>(network.links.size()), 8, 2,
                              ctx.seed);
    const int slot = get_int(ctx.config, "slot", 0);
    const RouteGame rg =
        build_route_game(network, truth.values, drivers, slot);
    game = rg.game;
    learner.reward_min = rg.utility_lower;
    learner.reward_max = rg.utility_upper;
  } else {
    throw std::invalid_argument(
        "field game must be coordination, matching_pennies or congestion, "
        "got: " + kind);
  }

  const PayoffEnvironment env =
      ctx.config.contains("environment")
          ? parse_environment(ctx.config["environment"])
          : PayoffEnvironment::deterministic();

  const LearningResult result =
      simulate_learning(game, env, learner, outage_eta);

  // trajectory: one row per (step, player)
  std::vector<double> t_col, player_col, action_col, payoff_col, top_col;
  for (std::size_t t = 0; t < result.trajectory.actions.size(); ++t) {
    for (int n = 0; n < game.base.num_players; ++n) {
      t_col.push_back(static_cast<double>(t));
      player_col.push_back(n);
      action_col.push_back(result.trajectory.actions[t][n]);
      payoff_col.push_back(result.trajectory.payoffs[t][n]);
      top_col.push_back(result.trajectory.strategies[t][n].maxCoeff());
    }
  }
  write_csv_columns(ctx.out_dir / "trajectory.csv",
                    {"step", "player", "action", "payoff", "max_probability"},
                    {t_col, player_col, action_col, payoff_col, top_col});

  nlohmann::json summary;
  summary["converged"] = result.summary.converged;
  summary["converged_at"] = result.summary.converged_at;
  summary["final_profile"] = result.summary.final_profile;
  summary["expected_payoff"] = result.summary.expected_payoff;
  summary["outage"] = result.summary.outage;
  summary["outage_eta"] = result.summary.outage_threshold;
  double profiles = 1.0;
  for (int count : game.base.action_counts) profiles *= count;
  if (profiles <= 1e6) {
    summary["final_profile_is_nash"] =
        is_pure_nash(game.base, result.summary.final_profile);
    summary["pure_nash_profiles"] = enumerate_pure_nash(game.base);
  }
  write_text(ctx.out_dir / "summary.json", summary.dump(2) + "\n");
  ctx.log("game: " + std::to_string(result.trajectory.actions.size()) +
          " steps simulated");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(ctx, "game", ctx.config, wall);
}

}  // namespace crowdsense::cli
