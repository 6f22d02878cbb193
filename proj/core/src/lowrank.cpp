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

#include "crowdsense/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crowdsense/error.hpp"

namespace crowdsense {

ObservationMask::ObservationMask(Eigen::Index rows, Eigen::Index cols,
                                 std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ < 0 || cols_ < 0) {
    throw std::invalid_argument("ObservationMask: negative shape");
  }
  for (const auto& [r, c] : entries_) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
      throw std::invalid_argument("ObservationMask: index out of range");
    }
  }
  std::sort(entries_.begin(), entries_.end());
  if (std::adjacent_find(entries_.begin(), entries_.end()) != entries_.end()) {
    throw std::invalid_argument("ObservationMask: duplicate index pair");
  }
}

ObservationMask ObservationMask::full(Eigen::Index rows, Eigen::Index cols) {
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) entries.emplace_back(r, c);
  }
  return ObservationMask(rows, cols, std::move(entries));
}

ObservationMask ObservationMask::empty(Eigen::Index rows, Eigen::Index cols) {
  return ObservationMask(rows, cols, {});
}

Eigen::MatrixXd ObservationMask::indicator() const {
  Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const auto& [r, c] : entries_) ind(r, c) = 1.0;
  return ind;
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("soft_threshold: tau must be >= 0");
  }
  return m.array().sign() * (m.array().abs() - tau).max(0.0);
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("svt: tau must be >= 0");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("svt: SVD did not converge");
  }
  const Eigen::VectorXd shrunk =
      (svd.singularValues().array() - tau).max(0.0);
  return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd project_omega(const Eigen::MatrixXd& m,
                              const ObservationMask& mask) {
  if (m.rows() != mask.rows() || m.cols() != mask.cols()) {
    throw std::invalid_argument("project_omega: shape mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (const auto& [r, c] : mask.entries()) out(r, c) = m(r, c);
  return out;
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("SolverConfig: lambda must be > 0");
  if (epsilon < 0.0) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
  if (!(mu_init > 0.0)) throw std::invalid_argument("SolverConfig: mu_init must be > 0");
  if (!(mu_growth > 1.0)) throw std::invalid_argument("SolverConfig: mu_growth must be > 1");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("SolverConfig: rel_tol must be > 0");
}

SolverConfig SolverConfig::for_matrix(const Eigen::MatrixXd& y) {
  SolverConfig cfg;
  cfg.lambda = 1.0 / std::sqrt(static_cast<double>(std::max(y.rows(), y.cols())));
  const double spectral = y.operatorNorm();
  cfg.mu_init = spectral > 0.0 ? 1.25 / spectral : 1.0;
  return cfg;
}

SolverConfig SolverConfig::for_masked(const Eigen::MatrixXd& y,
                                      const ObservationMask& mask) {
  const double density =
      static_cast<double>(mask.size()) /
      static_cast<double>(std::max<Eigen::Index>(1, mask.rows() * mask.cols()));
  Eigen::MatrixXd data = project_omega(y, mask);
  SolverConfig cfg = for_matrix(data);
  // 1/sqrt(density * max) scaling, calibrated by a constant: smaller values
  // let the sparse term absorb observed signal on subsampled instances.
  cfg.lambda = 1.6 / std::sqrt(std::max(1.0, density * static_cast<double>(
                                                  std::max(y.rows(), y.cols()))));
  cfg.mu_growth = 1.02;
  return cfg;
}

namespace {

double nuclear_norm(const Eigen::MatrixXd& m) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues().sum();
}

}  // namespace

Decomposition stable_pca(const Eigen::MatrixXd& y, const SolverConfig& config) {
  config.validate();
  Decomposition out;
  out.sparse = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  out.low_rank = Eigen::MatrixXd::Zero(y.rows(), y.cols());

  const double norm_y = y.norm();
  const double feasible_tol = config.epsilon * (1.0 + config.rel_tol);
  // X = 0 is optimal whenever it is feasible (nuclear norm 0).
  if (norm_y <= std::max(feasible_tol, 0.0) || norm_y == 0.0) {
    out.converged = true;
    out.final_residual = norm_y;
    return out;
  }

  const double stop_tol = std::max(config.epsilon, config.rel_tol * norm_y);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  Eigen::MatrixXd dual = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  double mu = config.mu_init;

  double best_residual = norm_y;
  double best_feasible_nuclear = std::numeric_limits<double>::infinity();
  bool have_feasible = false;

  for (int k = 1; k <= config.max_iters; ++k) {
    x = svt(y + dual / mu, 1.0 / mu);
    const Eigen::MatrixXd residual_mat = y - x;
    const double residual = residual_mat.norm();
    out.residual_trace.push_back(residual);
    out.iterations = k;

    if (residual <= feasible_tol) {
      const double nn = nuclear_norm(x);
      if (!have_feasible || nn < best_feasible_nuclear) {
        have_feasible = true;
        best_feasible_nuclear = nn;
        out.low_rank = x;
        out.final_residual = residual;
      }
    } else if (!have_feasible && residual < best_residual) {
      best_residual = residual;
      out.low_rank = x;
      out.final_residual = residual;
    }
    if (residual <= stop_tol) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(residual) || residual > 1e12 * norm_y) {
      throw NumericalError("stable_pca: iteration diverged");
    }
    dual += mu * residual_mat;
    mu *= config.mu_growth;
  }
  return out;
}

namespace {

// Shared inexact-ALM loop for robust PCA and masked robust completion.
// Off-mask entries carry no constraint: the error block splits into a
// soft-thresholded part on the mask (the sparse estimate) and an exact
// copy off the mask, which keeps the off-mask violation identically zero.
Decomposition robust_alm(const Eigen::MatrixXd& data,
                         const Eigen::MatrixXd& mask_indicator, bool masked,
                         const SolverConfig& config) {
  Decomposition out;
  const auto rows = data.rows();
  const auto cols = data.cols();
  out.low_rank = Eigen::MatrixXd::Zero(rows, cols);
  out.sparse = Eigen::MatrixXd::Zero(rows, cols);

  const double norm_data = data.norm();
  if (norm_data == 0.0) {
    out.converged = true;
    return out;
  }
  const double stop_tol = std::max(config.epsilon, config.rel_tol * norm_data);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd sparse = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd fill = Eigen::MatrixXd::Zero(rows, cols);  // off-mask slack
  Eigen::MatrixXd dual = Eigen::MatrixXd::Zero(rows, cols);
  double mu = config.mu_init;
  double prev_residual = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= config.max_iters; ++k) {
    x = svt(data - sparse - fill + dual / mu, 1.0 / mu);
    const Eigen::MatrixXd g = data - x + dual / mu;
    sparse = soft_threshold(g, config.lambda / mu);
    if (masked) {
      sparse = sparse.cwiseProduct(mask_indicator);
      fill = g - g.cwiseProduct(mask_indicator);
    }
    const Eigen::MatrixXd residual_mat = data - x - sparse - fill;
    const double residual = residual_mat.norm();
    out.residual_trace.push_back(residual);
    out.iterations = k;
    out.final_residual = residual;
    out.low_rank = x;
    out.sparse = sparse;

    if (residual <= stop_tol) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(residual) || residual > 1e12 * norm_data) {
      throw NumericalError("robust recovery: iteration diverged");
    }
    dual += mu * residual_mat;
    // Hold the penalty whenever the violation went up; escalating into an
    // oscillation stalls the masked problems.
    if (residual <= prev_residual) {
      mu *= config.mu_growth;
    }
    prev_residual = residual;
  }
  return out;
}

}  // namespace

Decomposition robust_pca(const Eigen::MatrixXd& y, const SolverConfig& config) {
  config.validate();
  return robust_alm(y, Eigen::MatrixXd(), /*masked=*/false, config);
}

Decomposition robust_completion(const Eigen::MatrixXd& y_observed,
                                const ObservationMask& mask,
                                const SolverConfig& config) {
  config.validate();
  if (y_observed.rows() != mask.rows() || y_observed.cols() != mask.cols()) {
    throw std::invalid_argument("robust_completion: shape mismatch with mask");
  }
  if (mask.size() == 0) {
    throw std::invalid_argument("robust_completion: mask must be nonempty");
  }
  const Eigen::MatrixXd data = project_omega(y_observed, mask);
  if (mask.is_full()) {
    return robust_alm(data, Eigen::MatrixXd(), /*masked=*/false, config);
  }
  return robust_alm(data, mask.indicator(), /*masked=*/true, config);
}

}  // namespace crowdsense
