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

#include "crowdsense/games.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace crowdsense {

void Game::check_valid() const {
  if (num_players < 1) {
    throw std::invalid_argument("Game: num_players must be >= 1");
  }
  if (static_cast<int>(action_counts.size()) != num_players) {
    throw std::invalid_argument("Game: one action count per player required");
  }
  for (int count : action_counts) {
    if (count < 1) throw std::invalid_argument("Game: empty action set");
  }
  if (!utility) throw std::invalid_argument("Game: missing utility oracle");
}

void Game::check_profile(const ActionProfile& profile) const {
  if (static_cast<int>(profile.size()) != num_players) {
    throw std::invalid_argument("Game: profile length mismatch");
  }
  for (int n = 0; n < num_players; ++n) {
    if (profile[n] < 0 || profile[n] >= action_counts[n]) {
      throw std::invalid_argument("Game: action out of range");
    }
  }
}

void SpatialGame::check_valid() const {
  base.check_valid();
  if (static_cast<int>(neighbors.size()) != base.num_players) {
    throw std::invalid_argument("SpatialGame: one neighbor set per player");
  }
  for (int n = 0; n < base.num_players; ++n) {
    for (int j : neighbors[n]) {
      if (j == n || j < 0 || j >= base.num_players) {
        throw std::invalid_argument("SpatialGame: bad neighbor index");
      }
    }
  }
}

bool is_pure_nash(const Game& game, const ActionProfile& profile) {
  game.check_valid();
  game.check_profile(profile);
  ActionProfile candidate = profile;
  for (int n = 0; n < game.num_players; ++n) {
    const double current = game.utility(n, profile);
    for (int a = 0; a < game.action_counts[n]; ++a) {
      if (a == profile[n]) continue;
      candidate[n] = a;
      if (game.utility(n, candidate) > current) return false;
    }
    candidate[n] = profile[n];
  }
  return true;
}

std::vector<ActionProfile> enumerate_pure_nash(const Game& game) {
  game.check_valid();
  double space = 1.0;
  for (int count : game.action_counts) space *= count;
  if (space > 1e6) {
    throw std::invalid_argument(
        "enumerate_pure_nash: profile space exceeds 10^6");
  }
  std::vector<ActionProfile> found;
  ActionProfile profile(game.num_players, 0);
  while (true) {
    if (is_pure_nash(game, profile)) found.push_back(profile);
    // lexicographic odometer
    int pos = game.num_players - 1;
    while (pos >= 0 && ++profile[pos] == game.action_counts[pos]) {
      profile[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return found;
}

double altruistic_utility(const SpatialGame& game, int player,
                          const ActionProfile& profile) {
  game.check_valid();
  game.base.check_profile(profile);
  if (player < 0 || player >= game.base.num_players) {
    throw std::invalid_argument("altruistic_utility: player out of range");
  }
  double acc = game.base.utility(player, profile);
  for (int j : game.neighbors[player]) acc += game.base.utility(j, profile);
  return acc;
}

MixedStrategy lri_update(const MixedStrategy& p, int chosen, double r_norm,
                         double step_size) {
  if (!(r_norm >= 0.0 && r_norm <= 1.0)) {
    throw std::invalid_argument("lri_update: r_norm must lie in [0, 1]");
  }
  if (!(step_size > 0.0 && step_size < 1.0)) {
    throw std::invalid_argument("lri_update: step size must lie in (0, 1)");
  }
  if (chosen < 0 || chosen >= p.size()) {
    throw std::invalid_argument("lri_update: chosen action out of range");
  }
  const double gain = step_size * r_norm;
  if (gain == 0.0) return p;
  MixedStrategy next = p * (1.0 - gain);
  next[chosen] = p[chosen] + gain * (1.0 - p[chosen]);
  const double sum = next.sum();
  if (sum > 0.0) next /= sum;
  return next;
}

void LearnerConfig::validate() const {
  if (!(step_size > 0.0 && step_size < 1.0)) {
    throw std::invalid_argument("LearnerConfig: step_size must lie in (0, 1)");
  }
  if (!(reward_min < reward_max)) {
    throw std::invalid_argument("LearnerConfig: reward_min must be < reward_max");
  }
  if (horizon < 1) {
    throw std::invalid_argument("LearnerConfig: horizon must be >= 1");
  }
}

PayoffEnvironment PayoffEnvironment::deterministic() { return {}; }

PayoffEnvironment PayoffEnvironment::additive_uniform(double width) {
  if (width < 0.0) {
    throw std::invalid_argument("PayoffEnvironment: width must be >= 0");
  }
  return {Kind::kAdditiveUniform, width};
}

PayoffEnvironment PayoffEnvironment::bernoulli_success() {
  return {Kind::kBernoulliSuccess, 0.0};
}

namespace {

double realize_payoff(const PayoffEnvironment& env, double utility,
                      std::mt19937_64& rng) {
  switch (env.kind) {
    case PayoffEnvironment::Kind::kDeterministic:
      return utility;
    case PayoffEnvironment::Kind::kAdditiveUniform: {
      std::uniform_real_distribution<double> noise(-env.width / 2.0,
                                                   env.width / 2.0);
      return utility + noise(rng);
    }
    case PayoffEnvironment::Kind::kBernoulliSuccess: {
      const double prob = std::clamp(utility, 0.0, 1.0);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      return unit(rng) < prob ? 1.0 : 0.0;
    }
  }
  return utility;  // unreachable
}

int sample_action(const MixedStrategy& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (Eigen::Index a = 0; a < p.size(); ++a) {
    acc += p[a];
    if (u < acc) return static_cast<int>(a);
  }
  return static_cast<int>(p.size() - 1);
}

constexpr double kConvergenceLevel = 0.99;

}  // namespace

LearningResult simulate_learning(const SpatialGame& game,
                                 const PayoffEnvironment& environment,
                                 const LearnerConfig& config,
                                 double outage_threshold) {
  game.check_valid();
  config.validate();
  const int players = game.base.num_players;
  const double span = config.reward_max - config.reward_min;

  std::mt19937_64 rng(config.seed);
  std::vector<MixedStrategy> strategies(players);
  for (int n = 0; n < players; ++n) {
    strategies[n] = MixedStrategy::Constant(
        game.base.action_counts[n],
        1.0 / static_cast<double>(game.base.action_counts[n]));
  }

  LearningResult result;
  auto& traj = result.trajectory;
  auto& summary = result.summary;
  summary.outage_threshold = outage_threshold;
  std::vector<double> payoff_sums(players, 0.0);
  std::vector<double> outage_counts(players, 0.0);

  int steps = 0;
  for (int t = 0; t < config.horizon; ++t) {
    ActionProfile profile(players);
    for (int n = 0; n < players; ++n) {
      profile[n] = sample_action(strategies[n], rng);
    }
    std::vector<double> raw(players);
    for (int n = 0; n < players; ++n) {
      raw[n] = realize_payoff(environment, game.base.utility(n, profile), rng);
      const double r_norm = std::clamp((raw[n] - config.reward_min) / span, 0.0, 1.0);
      strategies[n] = lri_update(strategies[n], profile[n], r_norm,
                                 config.step_size);
      payoff_sums[n] += raw[n];
      if (-raw[n] > outage_threshold) outage_counts[n] += 1.0;
    }
    traj.actions.push_back(profile);
    traj.payoffs.push_back(raw);
    traj.strategies.push_back(strategies);
    ++steps;

    bool all_settled = true;
    for (int n = 0; n < players && all_settled; ++n) {
      all_settled = strategies[n].maxCoeff() >= kConvergenceLevel;
    }
    if (all_settled) {
      summary.converged = true;
      summary.converged_at = t;
      break;
    }
  }

  summary.final_profile.resize(players);
  for (int n = 0; n < players; ++n) {
    Eigen::Index best = 0;
    strategies[n].maxCoeff(&best);
    summary.final_profile[n] = static_cast<int>(best);
  }
  summary.expected_payoff.resize(players);
  summary.outage.resize(players);
  for (int n = 0; n < players; ++n) {
    summary.expected_payoff[n] = payoff_sums[n] / steps;
    summary.outage[n] = outage_counts[n] / steps;
  }
  return result;
}

double outage_probability(const std::vector<double>& samples, double eta) {
  if (samples.empty()) {
    throw std::invalid_argument("outage_probability: empty sample list");
  }
  double count = 0.0;
  for (double s : samples) {
    if (s > eta) count += 1.0;
  }
  return count / static_cast<double>(samples.size());
}

SpatialGame make_coordination_game(int num_players, int num_actions) {
  if (num_players < 2 || num_actions < 2) {
    throw std::invalid_argument(
        "make_coordination_game: need >= 2 players and >= 2 actions");
  }
  SpatialGame sg;
  sg.base.num_players = num_players;
  sg.base.action_counts.assign(num_players, num_actions);
  sg.base.utility = [](int, const ActionProfile& profile) {
    const int first = profile.front();
    for (int a : profile) {
      if (a != first) return 0.0;
    }
    return 1.0;
  };
  sg.neighbors.resize(num_players);
  for (int n = 0; n < num_players; ++n) {
    for (int j = 0; j < num_players; ++j) {
      if (j != n) sg.neighbors[n].push_back(j);
    }
  }
  return sg;
}

SpatialGame make_matching_pennies() {
  SpatialGame sg;
  sg.base.num_players = 2;
  sg.base.action_counts = {2, 2};
  sg.base.utility = [](int player, const ActionProfile& profile) {
    const double matcher = profile[0] == profile[1] ? 1.0 : -1.0;
    return player == 0 ? matcher : -matcher;
  };
  sg.neighbors = {{1}, {0}};
  return sg;
}

}  // namespace crowdsense
