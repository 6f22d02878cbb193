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

#include "crowdsense/admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crowdsense/error.hpp"

namespace crowdsense {

AgentObjective AgentObjective::quadratic(Eigen::MatrixXd b_matrix,
                                         Eigen::VectorXd b_vector) {
  if (b_matrix.cols() < 1) {
    throw std::invalid_argument("AgentObjective::quadratic: empty dimension");
  }
  if (b_matrix.rows() != b_vector.size()) {
    throw std::invalid_argument(
        "AgentObjective::quadratic: B and b row counts differ");
  }
  AgentObjective obj;
  obj.kind_ = Kind::kQuadratic;
  obj.dimension_ = static_cast<int>(b_matrix.cols());
  obj.b_matrix_ = std::move(b_matrix);
  obj.b_vector_ = std::move(b_vector);
  return obj;
}

AgentObjective AgentObjective::scalar(double c) {
  AgentObjective obj;
  obj.kind_ = Kind::kScalarQuadratic;
  obj.dimension_ = 1;
  obj.c_ = c;
  return obj;
}

double AgentObjective::value(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_) {
    throw std::invalid_argument("AgentObjective::value: dimension mismatch");
  }
  if (kind_ == Kind::kScalarQuadratic) {
    const double d = x[0] - c_;
    return d * d;
  }
  return 0.5 * (b_matrix_ * x - b_vector_).squaredNorm();
}

Topology::Topology(int agent_count, std::vector<std::pair<int, int>> edges)
    : agent_count_(agent_count) {
  if (agent_count < 1) {
    throw std::invalid_argument("Topology: agent_count must be >= 1");
  }
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("Topology: self-loop edge");
    if (a < 0 || b < 0 || a >= agent_count || b >= agent_count) {
      throw std::invalid_argument("Topology: edge endpoint out of range");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  neighborhoods_.assign(agent_count_, {});
  for (int i = 0; i < agent_count_; ++i) neighborhoods_[i].push_back(i);
  for (const auto& [a, b] : edges_) {
    neighborhoods_[a].push_back(b);
    neighborhoods_[b].push_back(a);
  }
  for (auto& nbhd : neighborhoods_) std::sort(nbhd.begin(), nbhd.end());

  // BFS reachability from agent 0.
  std::vector<bool> seen(agent_count_, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : neighborhoods_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  connected_ = std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

Topology Topology::complete(int agent_count) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < agent_count; ++a) {
    for (int b = a + 1; b < agent_count; ++b) edges.emplace_back(a, b);
  }
  return Topology(agent_count, std::move(edges));
}

Topology Topology::path(int agent_count) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a + 1 < agent_count; ++a) edges.emplace_back(a, a + 1);
  return Topology(agent_count, std::move(edges));
}

Topology Topology::isolated(int agent_count) {
  return Topology(agent_count, {});
}

void AdmmConfig::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("AdmmConfig: mu must be > 0");
  if (max_iters < 1) throw std::invalid_argument("AdmmConfig: max_iters must be >= 1");
  if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) {
    throw std::invalid_argument("AdmmConfig: tolerances must be > 0");
  }
}

Eigen::VectorXd x_update(const AgentObjective& objective,
                         const Eigen::VectorXd& z_ref,
                         const Eigen::VectorXd& y, double mu) {
  if (z_ref.size() != objective.dimension() || y.size() != z_ref.size()) {
    throw std::invalid_argument("x_update: dimension mismatch");
  }
  if (objective.kind() == AgentObjective::Kind::kScalarQuadratic) {
    Eigen::VectorXd x(1);
    x[0] = (2.0 * objective.target() + mu * z_ref[0] - y[0]) / (2.0 + mu);
    return x;
  }
  const auto& b_mat = objective.b_matrix();
  Eigen::MatrixXd system = b_mat.transpose() * b_mat;
  system.diagonal().array() += mu;
  const Eigen::VectorXd rhs =
      b_mat.transpose() * objective.b_vector() + mu * z_ref - y;
  return system.ldlt().solve(rhs);
}

namespace {

Eigen::VectorXd mean_of_messages(const std::vector<Eigen::VectorXd>& xs,
                                 const std::vector<Eigen::VectorXd>& ys,
                                 double mu, const char* where) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw std::invalid_argument(std::string(where) +
                                ": state lists empty or mismatched");
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != acc.size() || ys[i].size() != acc.size()) {
      throw std::invalid_argument(std::string(where) + ": ragged state lists");
    }
    acc += xs[i] + ys[i] / mu;
  }
  return acc / static_cast<double>(xs.size());
}

}  // namespace

Eigen::VectorXd z_update_central(const std::vector<Eigen::VectorXd>& xs,
                                 const std::vector<Eigen::VectorXd>& ys,
                                 double mu) {
  return mean_of_messages(xs, ys, mu, "z_update_central");
}

Eigen::VectorXd z_update_neighbor(
    const std::vector<Eigen::VectorXd>& neighbor_xs,
    const std::vector<Eigen::VectorXd>& neighbor_ys, double mu) {
  return mean_of_messages(neighbor_xs, neighbor_ys, mu, "z_update_neighbor");
}

Eigen::VectorXd y_update(const Eigen::VectorXd& x, const Eigen::VectorXd& z_ref,
                         const Eigen::VectorXd& y, double mu) {
  if (x.size() != z_ref.size() || y.size() != x.size()) {
    throw std::invalid_argument("y_update: dimension mismatch");
  }
  return y + mu * (x - z_ref);
}

ConsensusResult run_consensus(const std::vector<AgentObjective>& objectives,
                              const Topology& topology,
                              const AdmmConfig& config) {
  config.validate();
  const int n_agents = topology.agent_count();
  if (static_cast<int>(objectives.size()) != n_agents) {
    throw std::invalid_argument(
        "run_consensus: one objective per agent required");
  }
  const int dim = objectives.front().dimension();
  for (const auto& obj : objectives) {
    if (obj.dimension() != dim) {
      throw std::invalid_argument(
          "run_consensus: objectives must share one dimension");
    }
  }

  const bool central = config.mode == AdmmMode::kCentral;
  const int n_z = central ? 1 : n_agents;

  ConsensusResult result;
  ConsensusState& st = result.state;
  st.local_x.assign(n_agents, Eigen::VectorXd::Zero(dim));
  st.local_y.assign(n_agents, Eigen::VectorXd::Zero(dim));
  st.local_z.assign(n_z, Eigen::VectorXd::Zero(dim));

  const auto z_ref = [&](int agent) -> const Eigen::VectorXd& {
    return central ? st.local_z[0] : st.local_z[agent];
  };

  for (int k = 1; k <= config.max_iters; ++k) {
    for (int i = 0; i < n_agents; ++i) {
      st.local_x[i] = x_update(objectives[i], z_ref(i), st.local_y[i], config.mu);
    }

    std::vector<Eigen::VectorXd> z_prev = st.local_z;
    if (central) {
      st.local_z[0] = z_update_central(st.local_x, st.local_y, config.mu);
    } else {
      std::vector<Eigen::VectorXd> new_z(n_agents);
      for (int i = 0; i < n_agents; ++i) {
        // Gather the one-hop inbox; the update sees nothing else.
        std::vector<Eigen::VectorXd> inbox_x, inbox_y;
        for (int j : topology.neighborhood(i)) {
          inbox_x.push_back(st.local_x[j]);
          inbox_y.push_back(st.local_y[j]);
        }
        new_z[i] = z_update_neighbor(inbox_x, inbox_y, config.mu);
      }
      st.local_z = std::move(new_z);
    }

    IterationStats stats;
    double primal_sq = 0.0;
    double dual_sq = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      st.local_y[i] = y_update(st.local_x[i], z_ref(i), st.local_y[i], config.mu);
      primal_sq += (st.local_x[i] - z_ref(i)).squaredNorm();
      dual_sq += (z_ref(i) - (central ? z_prev[0] : z_prev[i])).squaredNorm();
    }
    stats.primal_residual = std::sqrt(primal_sq);
    stats.dual_residual = config.mu * std::sqrt(dual_sq);
    if (!central) {
      double worst = 0.0;
      for (int i = 0; i < n_agents; ++i) {
        for (int j = i + 1; j < n_agents; ++j) {
          worst = std::max(worst, (st.local_z[i] - st.local_z[j]).norm());
        }
      }
      stats.disagreement = worst;
    }
    st.trace.push_back(stats);
    st.iteration = k;
    result.iterations = k;

    if (!std::isfinite(stats.primal_residual) ||
        stats.primal_residual > 1e12) {
      throw NumericalError("run_consensus: residual diverged at iteration " +
                           std::to_string(k));
    }
    if (stats.primal_residual < config.primal_tol &&
        stats.dual_residual < config.dual_tol) {
      result.converged = true;
      break;
    }
  }

  result.disagreement = st.trace.empty() ? 0.0 : st.trace.back().disagreement;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& z : st.local_z) mean += z;
  result.solution = mean / static_cast<double>(st.local_z.size());
  return result;
}

}  // namespace crowdsense
