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
// Low-rank recovery from noisy, corrupted and partially observed matrices:
// stable PCA         min |X|_*            s.t. |Y - X|_F <= eps
// robust PCA         min |X|_* + l|A|_1   s.t. |Y - X - A|_F <= eps
// robust completion  min |X|_* + l|A|_1   s.t. |P(Y) - P(X + A)|_F <= eps
// All three are solved with an inexact augmented-Lagrange-multiplier scheme
// built on singular-value and entrywise soft-thresholding.

#ifndef CROWDSENSE_LOWRANK_HPP_
#define CROWDSENSE_LOWRANK_HPP_

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace crowdsense {

// Index set of observed entries of an M x N matrix. Entries are stored
// sorted row-major; duplicates and out-of-range indices are rejected.
class ObservationMask {
 public:
  using Entry = std::pair<Eigen::Index, Eigen::Index>;

  ObservationMask(Eigen::Index rows, Eigen::Index cols,
                  std::vector<Entry> entries);

  static ObservationMask full(Eigen::Index rows, Eigen::Index cols);
  static ObservationMask empty(Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool is_full() const {
    return static_cast<Eigen::Index>(entries_.size()) == rows_ * cols_;
  }

  // 1.0 on observed entries, 0.0 elsewhere.
  Eigen::MatrixXd indicator() const;

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<Entry> entries_;
};

// Entrywise shrinkage sign(m) .* max(|m| - tau, 0).
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double tau);

// Singular value thresholding: U softthreshold(S, tau) V^T.
Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double tau);

// Copies entries on the mask, zeroes the rest. Idempotent and linear.
Eigen::MatrixXd project_omega(const Eigen::MatrixXd& m,
                              const ObservationMask& mask);

struct SolverConfig {
  double lambda = 0.1;     // rank-sparsity trade-off
  double epsilon = 0.0;    // noise tolerance; 0 means equality constraint
  double mu_init = 1.0;    // augmented-Lagrangian penalty
  double mu_growth = 1.5;  // penalty growth per iteration
  int max_iters = 1000;
  double rel_tol = 1e-7;

  // Defaults keyed to the data: lambda = 1/sqrt(max(M, N)),
  // mu_init = 1.25 / |Y|_2.
  static SolverConfig for_matrix(const Eigen::MatrixXd& y);

  // Defaults for partially observed data. The sparsity weight scales with
  // the sampling density, lambda = 1/sqrt(density * max(M, N)), and the
  // penalty grows gently (1.02): an aggressive schedule freezes the imputed
  // entries at an early crude iterate.
  static SolverConfig for_masked(const Eigen::MatrixXd& y,
                                 const ObservationMask& mask);

  void validate() const;
};

struct Decomposition {
  Eigen::MatrixXd low_rank;   // X
  Eigen::MatrixXd sparse;     // A
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_trace;  // constraint violation per iteration
};

// Eq. "min |X|_*  s.t. |Y - X|_F <= eps"; the sparse component is zero.
Decomposition stable_pca(const Eigen::MatrixXd& y, const SolverConfig& config);

Decomposition robust_pca(const Eigen::MatrixXd& y, const SolverConfig& config);

// Feasibility is measured on the mask only; off-mask entries of X are the
// completion estimate and A is supported on the mask.
Decomposition robust_completion(const Eigen::MatrixXd& y_observed,
                                const ObservationMask& mask,
                                const SolverConfig& config);

}  // namespace crowdsense

#endif  // CROWDSENSE_LOWRANK_HPP_
