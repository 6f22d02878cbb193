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
// Toolkit acceptance suite. Each criterion runs at its stated tolerance and
// prints one PASS/FAIL line; the exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crowdsense/admm.hpp"
#include "crowdsense/copula.hpp"
#include "crowdsense/games.hpp"
#include "crowdsense/kernels.hpp"
#include "crowdsense/lowrank.hpp"
#include "crowdsense/metrics.hpp"
#include "crowdsense/scenario.hpp"

using namespace crowdsense;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << (detail.str().empty() ? "" : "; ") << what;
    }
  }
};

Eigen::MatrixXd random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = gauss(rng);
  }
  return m;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- criterion bodies -------------------------------------------------------

// Gaussian-copula joint pdf against the direct bivariate normal density on a
// 21x21 grid over [-3,3]^2 for rho in {0, 0.5, -0.8}; max abs error <= 1e-9.
void copula_correctness(Check& check) {
  const std::vector<MarginalModel> marginals(2,
                                             MarginalModel::gaussian(0.0, 1.0));
  double worst = 0.0;
  for (double rho : {0.0, 0.5, -0.8}) {
    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, rho, rho, 1.0;
    const auto copula = CopulaModel::gaussian(corr);
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        Eigen::VectorXd z(2);
        z << -3.0 + 0.3 * i, -3.0 + 0.3 * j;
        const double got = joint_pdf(copula, marginals, z);
        const double quad =
            (z[0] * z[0] - 2.0 * rho * z[0] * z[1] + z[1] * z[1]) /
            (2.0 * (1.0 - rho * rho));
        const double want =
            std::exp(-quad) / (2.0 * M_PI * std::sqrt(1.0 - rho * rho));
        worst = std::max(worst, std::abs(got - want));
      }
    }
  }
  check.require(worst <= 1e-9, "max abs error " + fmt(worst) + " > 1e-9");
  check.detail << "max abs error " << fmt(worst);
}

// 100 random datasets (n <= 100, dim <= 5), both kernel families: Gram
// symmetric, min eigenvalue >= -1e-8 * max; linear ridge == primal oracle
// within 1e-8.
void kernel_psd(Check& check) {
  std::mt19937_64 rng(0xACCE0002);
  std::uniform_int_distribution<int> n_dist(2, 100);
  std::uniform_int_distribution<int> dim_dist(1, 5);
  std::uniform_real_distribution<double> bw_dist(0.3, 2.5);
  std::uniform_int_distribution<int> deg_dist(1, 4);

  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_gaussian(rng, n_dist(rng), dim_dist(rng));
    const KernelSpec spec = trial % 2 == 0
                                ? KernelSpec::gaussian(bw_dist(rng))
                                : KernelSpec::polynomial(deg_dist(rng), 1.0);
    const auto gram = gram_matrix(spec, pts);
    if (gram.entries != gram.entries.transpose().eval()) {
      check.require(false, "asymmetric Gram at trial " + std::to_string(trial));
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.entries);
    const double max_eig = std::max(eig.eigenvalues().maxCoeff(), 1e-30);
    worst_ratio = std::max(worst_ratio, -eig.eigenvalues().minCoeff() / max_eig);
  }
  check.require(worst_ratio <= 1e-8,
                "eigenvalue ratio " + fmt(worst_ratio) + " > 1e-8");

  const auto x = random_gaussian(rng, 60, 4);
  const Eigen::VectorXd y = random_gaussian(rng, 60, 1);
  const double gamma = 0.3;
  const auto dual = ridge_fit(KernelSpec::polynomial(1, 0.0), x, y, gamma);
  Eigen::MatrixXd normal = x.transpose() * x;
  normal.diagonal().array() += gamma;
  const Eigen::VectorXd w = normal.ldlt().solve(x.transpose() * y);
  const auto test_pts = random_gaussian(rng, 25, 4);
  double worst_gap = 0.0;
  for (int i = 0; i < 25; ++i) {
    const double gap = std::abs(ridge_predict(dual, test_pts.row(i).transpose()) -
                                test_pts.row(i).dot(w));
    worst_gap = std::max(worst_gap, gap);
  }
  check.require(worst_gap <= 1e-8,
                "ridge vs primal gap " + fmt(worst_gap) + " > 1e-8");
  check.detail << "eig ratio " << fmt(worst_ratio) << ", ridge gap "
               << fmt(worst_gap);
}

// 50x50 rank-2 plus 5% gross corruption, lambda = 1/sqrt(50): relative error
// <= 1e-3 and anomaly-support recall >= 99%.
void rpca_recovery(Check& check) {
  std::mt19937_64 rng(0xACCE0003);
  const Eigen::MatrixXd low_rank =
      random_gaussian(rng, 50, 2) * random_gaussian(rng, 2, 50);
  Eigen::MatrixXd sparse = Eigen::MatrixXd::Zero(50, 50);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<int, int>> support;
  for (int r = 0; r < 50; ++r) {
    for (int c = 0; c < 50; ++c) {
      if (unit(rng) < 0.05) {
        sparse(r, c) = unit(rng) < 0.5 ? -10.0 : 10.0;
        support.emplace_back(r, c);
      }
    }
  }
  const Eigen::MatrixXd y = low_rank + sparse;
  auto config = SolverConfig::for_matrix(y);
  const auto result = robust_pca(y, config);

  const double rel = (result.low_rank - low_rank).norm() / low_rank.norm();
  check.require(rel <= 1e-3, "relative error " + fmt(rel) + " > 1e-3");

  const double cut = 1e-6 * result.sparse.cwiseAbs().maxCoeff();
  int hit = 0;
  for (const auto& [r, c] : support) {
    if (std::abs(result.sparse(r, c)) > cut) ++hit;
  }
  const double recall = static_cast<double>(hit) / support.size();
  check.require(recall >= 0.99, "support recall " + fmt(recall) + " < 0.99");
  check.detail << "rel error " << fmt(rel) << ", recall " << fmt(recall);
}

// 100x100 rank-2, 30% observed, no anomalies: relative error <= 1e-2 on each
// of 5 seeds.
void robust_completion_criterion(Check& check) {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(0xACCE0104 + seed);
    const Eigen::MatrixXd truth =
        random_gaussian(rng, 100, 2) * random_gaussian(rng, 2, 100);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ObservationMask::Entry> seen;
    for (int r = 0; r < 100; ++r) {
      for (int c = 0; c < 100; ++c) {
        if (unit(rng) < 0.3) seen.emplace_back(r, c);
      }
    }
    const ObservationMask mask(100, 100, std::move(seen));
    const auto config = SolverConfig::for_masked(truth, mask);
    const auto result = robust_completion(truth, mask, config);
    worst = std::max(worst, (result.low_rank - truth).norm() / truth.norm());
  }
  check.require(worst <= 1e-2, "worst relative error " + fmt(worst) + " > 1e-2");
  check.detail << "worst rel error " << fmt(worst);
}

// N=10 quadratic agents (n=5), central mode matches the normal-equations
// oracle within 1e-6 in <= 500 iterations; complete-graph neighbor trace
// identical to central within 1e-12.
void admm_consensus_criterion(Check& check) {
  std::mt19937_64 rng(0xACCE0005);
  std::vector<AgentObjective> objectives;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(5, 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < 10; ++i) {
    const Eigen::MatrixXd b_mat = random_gaussian(rng, 7, 5);
    const Eigen::VectorXd b_vec = random_gaussian(rng, 7, 1);
    normal += b_mat.transpose() * b_mat;
    rhs += b_mat.transpose() * b_vec;
    objectives.push_back(AgentObjective::quadratic(b_mat, b_vec));
  }
  const Eigen::VectorXd oracle = normal.ldlt().solve(rhs);

  AdmmConfig config;
  const auto topo = Topology::complete(10);
  const auto central = run_consensus(objectives, topo, config);
  const double gap = (central.solution - oracle).norm() / oracle.norm();
  check.require(central.converged && central.iterations <= 500,
                "central mode did not converge within 500 iterations");
  check.require(gap <= 1e-6, "solution gap " + fmt(gap) + " > 1e-6");

  AdmmConfig neighbor_cfg = config;
  neighbor_cfg.mode = AdmmMode::kNeighbor;
  const auto neighbor = run_consensus(objectives, topo, neighbor_cfg);
  double trace_gap = 0.0;
  const std::size_t steps =
      std::min(central.state.trace.size(), neighbor.state.trace.size());
  check.require(central.state.trace.size() == neighbor.state.trace.size(),
                "trace lengths differ between modes");
  for (std::size_t k = 0; k < steps; ++k) {
    trace_gap = std::max(trace_gap,
                         std::abs(central.state.trace[k].primal_residual -
                                  neighbor.state.trace[k].primal_residual));
    trace_gap = std::max(trace_gap,
                         std::abs(central.state.trace[k].dual_residual -
                                  neighbor.state.trace[k].dual_residual));
  }
  check.require(trace_gap <= 1e-12, "trace gap " + fmt(trace_gap) + " > 1e-12");
  check.detail << "iters " << central.iterations << ", gap " << fmt(gap)
               << ", trace gap " << fmt(trace_gap);
}

// 2x2 coordination, b=0.1, T=5000, 200 fixed seeds: >= 95% of runs converge
// to a brute-force-verified pure NE; matching pennies has no pure NE.
void learning_automata_criterion(Check& check) {
  const auto coord = make_coordination_game();
  const auto ne = enumerate_pure_nash(coord.base);
  int good = 0;
  for (int s = 0; s < 200; ++s) {
    LearnerConfig cfg;
    cfg.step_size = 0.1;
    cfg.horizon = 5000;
    cfg.seed = 0xACCE0006 + static_cast<std::uint64_t>(s);
    const auto run =
        simulate_learning(coord, PayoffEnvironment::deterministic(), cfg);
    if (run.summary.converged &&
        std::find(ne.begin(), ne.end(), run.summary.final_profile) != ne.end()) {
      ++good;
    }
  }
  check.require(good >= 190, std::to_string(good) + "/200 converged < 95%");

  const bool pennies_empty =
      enumerate_pure_nash(make_matching_pennies().base).empty();
  check.require(pennies_empty, "matching pennies reported a pure NE");
  check.detail << good << "/200 runs at a verified NE";
}

// qoi_score algebra over 10^4 random records; timeliness(0) = 1 exactly.
void metrics_algebra(Check& check) {
  std::mt19937_64 rng(0xACCE0007);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    QoIRecord r;
    r.quantity = unit(rng);
    r.precision = unit(rng);
    r.recall = unit(rng);
    r.accuracy = unit(rng);
    r.detail = unit(rng);
    r.timeliness = unit(rng);
    r.validity = unit(rng);
    const double score = qoi_score(r);
    const double least =
        std::min({r.quantity, r.precision, r.recall, r.accuracy, r.detail,
                  r.timeliness, r.validity});
    if (score > least + 1e-15) {
      check.require(false, "score above the smallest factor");
      return;
    }
    QoIRecord annihilated = r;
    annihilated.detail = 0.0;
    if (qoi_score(annihilated) != 0.0) {
      check.require(false, "zero factor did not annihilate");
      return;
    }
    QoIRecord bumped = r;
    bumped.recall = std::min(1.0, r.recall + 0.05);
    if (qoi_score(bumped) < score - 1e-15) {
      check.require(false, "score not monotone in recall");
      return;
    }
  }
  check.require(timeliness(0.0, 5.0) == 1.0, "timeliness(0) != 1");
  check.detail << "10^4 records";
}

// Reference desk-scale scenario: 30-link network, 60 slots, rank 2, sampling
// 0.5, ~3% anomalies, 5 drivers over 50 seeds. Mean recovery error <= 0.05,
// learned profile is a pure NE in >= 80% of seeds, and reports are
// byte-identical on re-run.
void scenario_criterion(Check& check) {
  ScenarioConfig cfg;  // defaults are the reference configuration
  double err_sum = 0.0;
  int nash = 0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const auto report = run_scenario(cfg, static_cast<std::uint64_t>(s));
    err_sum += report.recovery_relative_error;
    nash += report.learned_profile_is_nash ? 1 : 0;
  }
  const double mean_err = err_sum / seeds;
  check.require(mean_err <= 0.05, "mean recovery error " + fmt(mean_err) + " > 0.05");
  check.require(nash >= 40, std::to_string(nash) + "/50 NE passes < 80%");

  const std::string once = run_scenario(cfg, 17).to_json();
  const std::string twice = run_scenario(cfg, 17).to_json();
  check.require(once == twice, "report JSON differs between identical runs");
  check.detail << "mean rel error " << fmt(mean_err) << ", NE " << nash
               << "/50";
}

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<void(Check&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"copula-correctness", 1.0, copula_correctness},
      {"kernel-psd", 10.0, kernel_psd},
      {"rpca-recovery", 5.0, rpca_recovery},
      {"robust-completion", 20.0, robust_completion_criterion},
      {"admm-consensus", 2.0, admm_consensus_criterion},
      {"learning-automata", 30.0, learning_automata_criterion},
      {"metrics-algebra", 1.0, metrics_algebra},
      {"end-to-end-scenario", 180.0, scenario_criterion},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (seconds >= criterion.budget_seconds) {
      check.require(false, "runtime " + fmt(seconds) + "s over budget " +
                               fmt(criterion.budget_seconds) + "s");
    }
    ++failures;
    if (check.ok) --failures;
    std::printf("[%s] %-22s %6.2fs  %s\n", check.ok ? "PASS" : "FAIL",
                criterion.name.c_str(), seconds, check.detail.str().c_str());
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  } else {
    std::printf("all %zu criteria passed\n", criteria.size());
  }
  return failures;
}
