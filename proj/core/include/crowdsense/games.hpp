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
// Finite normal-form and spatial (local-interaction) games, a brute-force
// pure-Nash oracle for small games, altruistic neighborhood utilities, and
// linear reward-inaction learning automata playing under noisy payoffs.

#ifndef CROWDSENSE_GAMES_HPP_
#define CROWDSENSE_GAMES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace crowdsense {

using ActionProfile = std::vector<int>;

struct Game {
  int num_players = 0;
  std::vector<int> action_counts;
  // u_n evaluated on a full profile.
  std::function<double(int player, const ActionProfile& profile)> utility;

  void check_valid() const;
  void check_profile(const ActionProfile& profile) const;
};

// A game whose utilities depend only on a player's own action and those of
// its interaction neighbors J_n (J_n excludes n itself).
struct SpatialGame {
  Game base;
  std::vector<std::vector<int>> neighbors;

  void check_valid() const;
};

bool is_pure_nash(const Game& game, const ActionProfile& profile);

// Exhaustive pure-Nash search in lexicographic order; guards against
// profile spaces above 10^6.
std::vector<ActionProfile> enumerate_pure_nash(const Game& game);

// u_n(profile) + sum over j in J_n of u_j(profile).
double altruistic_utility(const SpatialGame& game, int player,
                          const ActionProfile& profile);

using MixedStrategy = Eigen::VectorXd;

// Linear reward-inaction step. r_norm = 0 and one-hot strategies are fixed
// points; the chosen action's probability never decreases.
MixedStrategy lri_update(const MixedStrategy& p, int chosen, double r_norm,
                         double step_size);

struct LearnerConfig {
  double step_size = 0.1;  // in (0, 1)
  double reward_min = 0.0;
  double reward_max = 1.0;  // reward_min < reward_max
  int horizon = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

// Realized-payoff model on top of the utility oracle.
struct PayoffEnvironment {
  enum class Kind { kDeterministic, kAdditiveUniform, kBernoulliSuccess };

  static PayoffEnvironment deterministic();
  // utility + Uniform(-width/2, width/2)
  static PayoffEnvironment additive_uniform(double width);
  // 1 with probability clamp(utility, 0, 1), else 0
  static PayoffEnvironment bernoulli_success();

  Kind kind = Kind::kDeterministic;
  double width = 0.0;
};

struct LearningTrajectory {
  std::vector<ActionProfile> actions;              // [t][player]
  std::vector<std::vector<double>> payoffs;        // [t][player], raw
  std::vector<std::vector<MixedStrategy>> strategies;  // post-update
};

struct LearningSummary {
  bool converged = false;
  int converged_at = -1;
  // argmax action per player at the end, whether or not converged
  ActionProfile final_profile;
  std::vector<double> expected_payoff;
  // empirical Pr{cost > eta} with cost = -payoff
  std::vector<double> outage;
  double outage_threshold = 0.0;
};

struct LearningResult {
  LearningTrajectory trajectory;
  LearningSummary summary;
};

// Every player samples from its mixed strategy, receives the realized
// normalized payoff and applies lri_update; stops when every player's max
// strategy component reaches 0.99 or the horizon runs out. Deterministic
// given the seed.
LearningResult simulate_learning(const SpatialGame& game,
                                 const PayoffEnvironment& environment,
                                 const LearnerConfig& config,
                                 double outage_threshold = 0.0);

// Fraction of samples strictly above eta (cost exceedance).
double outage_probability(const std::vector<double>& samples, double eta);

// Built-in games.
SpatialGame make_coordination_game(int num_players = 2, int num_actions = 2);
SpatialGame make_matching_pennies();

}  // namespace crowdsense

#endif  // CROWDSENSE_GAMES_HPP_
