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
// Global-consensus ADMM over an explicit agent topology. Two modes: the
// classic central z-averaging, and a decentralized variant where each agent
// averages only over its one-hop neighborhood. Each iteration is a
// synchronous round; an agent reads its own state plus, in neighbor mode,
// the (x_j + y_j/mu) messages of its neighborhood, which the engine gathers
// explicitly so the access restriction is structural.

#ifndef CROWDSENSE_ADMM_HPP_
#define CROWDSENSE_ADMM_HPP_

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace crowdsense {

// f_i(x) = 0.5 |B x - b|^2 (quadratic) or (x - c)^2 (scalar_quadratic, n=1).
class AgentObjective {
 public:
  enum class Kind { kQuadratic, kScalarQuadratic };

  static AgentObjective quadratic(Eigen::MatrixXd b_matrix,
                                  Eigen::VectorXd b_vector);
  static AgentObjective scalar(double c);

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const Eigen::MatrixXd& b_matrix() const { return b_matrix_; }
  const Eigen::VectorXd& b_vector() const { return b_vector_; }
  double target() const { return c_; }

  double value(const Eigen::VectorXd& x) const;

 private:
  AgentObjective() = default;

  Kind kind_ = Kind::kScalarQuadratic;
  int dimension_ = 1;
  Eigen::MatrixXd b_matrix_;
  Eigen::VectorXd b_vector_;
  double c_ = 0.0;
};

// Undirected agent graph; neighborhoods include the agent itself.
class Topology {
 public:
  Topology(int agent_count, std::vector<std::pair<int, int>> edges);

  static Topology complete(int agent_count);
  static Topology path(int agent_count);
  static Topology isolated(int agent_count);

  int agent_count() const { return agent_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  // Sorted, includes the agent itself.
  const std::vector<int>& neighborhood(int agent) const {
    return neighborhoods_[agent];
  }
  bool connected() const { return connected_; }

 private:
  int agent_count_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighborhoods_;
  bool connected_ = false;
};

enum class AdmmMode { kCentral, kNeighbor };

struct AdmmConfig {
  double mu = 1.0;
  int max_iters = 500;
  double primal_tol = 1e-8;
  double dual_tol = 1e-8;
  AdmmMode mode = AdmmMode::kCentral;

  void validate() const;
};

// argmin_x f_i(x) + y^T (x - z_ref) + (mu/2) |x - z_ref|^2.
Eigen::VectorXd x_update(const AgentObjective& objective,
                         const Eigen::VectorXd& z_ref,
                         const Eigen::VectorXd& y, double mu);

// z = (1/N) sum_i (x_i + y_i / mu).
Eigen::VectorXd z_update_central(const std::vector<Eigen::VectorXd>& xs,
                                 const std::vector<Eigen::VectorXd>& ys,
                                 double mu);

// Mean over a gathered neighborhood only; the caller supplies exactly the
// states an agent is allowed to see.
Eigen::VectorXd z_update_neighbor(const std::vector<Eigen::VectorXd>& neighbor_xs,
                                  const std::vector<Eigen::VectorXd>& neighbor_ys,
                                  double mu);

// y <- y + mu (x - z_ref).
Eigen::VectorXd y_update(const Eigen::VectorXd& x, const Eigen::VectorXd& z_ref,
                         const Eigen::VectorXd& y, double mu);

struct IterationStats {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double disagreement = 0.0;  // max pairwise |z_i - z_j|, neighbor mode
};

struct ConsensusState {
  std::vector<Eigen::VectorXd> local_x;
  std::vector<Eigen::VectorXd> local_y;
  std::vector<Eigen::VectorXd> local_z;  // one entry in central mode
  int iteration = 0;
  std::vector<IterationStats> trace;
};

struct ConsensusResult {
  Eigen::VectorXd solution;  // z (central) or the mean of the z_i (neighbor)
  ConsensusState state;
  bool converged = false;
  int iterations = 0;
  double disagreement = 0.0;
};

ConsensusResult run_consensus(const std::vector<AgentObjective>& objectives,
                              const Topology& topology,
                              const AdmmConfig& config);

}  // namespace crowdsense

#endif  // CROWDSENSE_ADMM_HPP_
