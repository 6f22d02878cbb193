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

#include "crowdsense/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crowdsense/normal.hpp"

namespace crowdsense {

namespace {

constexpr double kBoundaryClamp = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sample_stddev(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

// Type-7 quantile on a sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  const double sd = sample_stddev(sorted);
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  double h = 0.9 * spread * std::pow(n, -0.2);
  if (!(h > 0.0)) {
    // Degenerate sample (all values equal): fall back to a hair's width.
    h = 1e-9 * std::max(1.0, std::abs(sorted.front()));
  }
  return h;
}

}  // namespace

MarginalModel MarginalModel::gaussian(double mean, double stddev) {
  if (!(stddev > 0.0)) {
    throw std::invalid_argument("MarginalModel::gaussian: stddev must be > 0");
  }
  MarginalModel m;
  m.kind_ = Kind::kGaussian;
  m.mean_ = mean;
  m.stddev_ = stddev;
  return m;
}

MarginalModel MarginalModel::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("MarginalModel::exponential: rate must be > 0");
  }
  MarginalModel m;
  m.kind_ = Kind::kExponential;
  m.rate_ = rate;
  return m;
}

MarginalModel MarginalModel::empirical(std::vector<double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument(
        "MarginalModel::empirical: fewer than 2 samples");
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument(
          "MarginalModel::empirical: samples must be finite");
    }
  }
  std::sort(samples.begin(), samples.end());
  MarginalModel m;
  m.kind_ = Kind::kEmpirical;
  m.bandwidth_ = silverman_bandwidth(samples);
  m.samples_ = std::move(samples);
  return m;
}

MarginalModel fit_empirical_marginal(std::vector<double> samples) {
  return MarginalModel::empirical(std::move(samples));
}

double MarginalModel::cdf(double z) const {
  switch (kind_) {
    case Kind::kGaussian:
      return normal_cdf((z - mean_) / stddev_);
    case Kind::kExponential:
      return z <= 0.0 ? 0.0 : -std::expm1(-rate_ * z);
    case Kind::kEmpirical: {
      if (z == kNegInf) return 0.0;
      if (z == std::numeric_limits<double>::infinity()) return 1.0;
      const double n = static_cast<double>(samples_.size());
      const auto count = static_cast<double>(
          std::upper_bound(samples_.begin(), samples_.end(), z) -
          samples_.begin());
      return std::clamp(count / (n + 1.0), 1.0 / (n + 1.0), n / (n + 1.0));
    }
  }
  return 0.0;  // unreachable
}

double MarginalModel::pdf(double z) const {
  switch (kind_) {
    case Kind::kGaussian:
      return normal_pdf((z - mean_) / stddev_) / stddev_;
    case Kind::kExponential:
      return z < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * z);
    case Kind::kEmpirical: {
      double acc = 0.0;
      for (double x : samples_) acc += normal_pdf((z - x) / bandwidth_);
      return acc / (static_cast<double>(samples_.size()) * bandwidth_);
    }
  }
  return 0.0;  // unreachable
}

double MarginalModel::log_pdf(double z) const {
  switch (kind_) {
    case Kind::kGaussian: {
      const double t = (z - mean_) / stddev_;
      return -0.5 * t * t - std::log(stddev_ * 2.5066282746310005024);
    }
    case Kind::kExponential:
      return z < 0.0 ? kNegInf : std::log(rate_) - rate_ * z;
    case Kind::kEmpirical:
      return std::log(pdf(z));
  }
  return kNegInf;  // unreachable
}

double eval_marginal_cdf(const MarginalModel& model, double z) {
  return model.cdf(z);
}

CopulaModel CopulaModel::independence(int dimension) {
  if (dimension < 1) {
    throw std::invalid_argument(
        "CopulaModel::independence: dimension must be >= 1");
  }
  CopulaModel c;
  c.kind_ = Kind::kIndependence;
  c.dimension_ = dimension;
  return c;
}

CopulaModel CopulaModel::gaussian(Eigen::MatrixXd correlation) {
  const auto n = correlation.rows();
  if (n < 1 || correlation.cols() != n) {
    throw std::invalid_argument("CopulaModel::gaussian: matrix must be square");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(correlation(i, i) - 1.0) > 1e-12) {
      throw std::invalid_argument(
          "CopulaModel::gaussian: diagonal entries must be 1");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(correlation(i, j) - correlation(j, i)) > 1e-12) {
        throw std::invalid_argument(
            "CopulaModel::gaussian: matrix must be symmetric");
      }
      if (std::abs(correlation(i, j)) > 1.0 + 1e-12) {
        throw std::invalid_argument(
            "CopulaModel::gaussian: entries must lie in [-1, 1]");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument(
        "CopulaModel::gaussian: correlation matrix is not positive "
        "semi-definite");
  }
  CopulaModel c;
  c.kind_ = Kind::kGaussian;
  c.dimension_ = static_cast<int>(n);
  c.correlation_ = std::move(correlation);
  return c;
}

namespace {

Eigen::VectorXd clamp_interior(const Eigen::VectorXd& u) {
  Eigen::VectorXd v = u;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = std::clamp(v[i], kBoundaryClamp, 1.0 - kBoundaryClamp);
  }
  return v;
}

void check_unit_cube(const Eigen::VectorXd& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
      throw std::invalid_argument("copula: u outside [0,1]^N");
    }
  }
}

// Monte Carlo estimate of the Gaussian copula cdf for dimension >= 3.
// Fixed internal seed keeps the function pure; standard error ~1e-3.
double gaussian_cdf_monte_carlo(const Eigen::MatrixXd& correlation,
                                const Eigen::VectorXd& quantiles) {
  Eigen::LLT<Eigen::MatrixXd> llt(correlation);
  Eigen::MatrixXd chol;
  if (llt.info() == Eigen::Success) {
    chol = llt.matrixL();
  } else {
    // Semi-definite matrix: factor through the eigendecomposition.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation);
    chol = eig.eigenvectors() *
           eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  constexpr int kSamples = 200000;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = correlation.rows();
  Eigen::VectorXd w(n);
  long long hits = 0;
  for (int s = 0; s < kSamples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] = gauss(rng);
    const Eigen::VectorXd z = chol * w;
    bool below = true;
    for (Eigen::Index i = 0; i < n && below; ++i) below = z[i] <= quantiles[i];
    hits += below ? 1 : 0;
  }
  return static_cast<double>(hits) / kSamples;
}

double gaussian_copula_cdf(const CopulaModel& copula,
                           const Eigen::VectorXd& u) {
  // Coordinates at 1 are marginalized out; any coordinate at 0 kills the cdf.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] <= kBoundaryClamp) return 0.0;
    if (u[i] < 1.0 - kBoundaryClamp) active.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(active.size());
  if (m == 0) return 1.0;
  if (m == 1) return u[active[0]];
  Eigen::VectorXd q(m);
  for (Eigen::Index i = 0; i < m; ++i) q[i] = normal_quantile(u[active[i]]);
  if (m == 2) {
    const double rho = copula.correlation()(active[0], active[1]);
    return bivariate_normal_cdf(q[0], q[1], rho);
  }
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      sub(i, j) = copula.correlation()(active[i], active[j]);
    }
  }
  return gaussian_cdf_monte_carlo(sub, q);
}

}  // namespace

double copula_cdf(const CopulaModel& copula, const Eigen::VectorXd& u) {
  if (u.size() != copula.dimension()) {
    throw std::invalid_argument("copula_cdf: dimension mismatch");
  }
  check_unit_cube(u);
  switch (copula.kind()) {
    case CopulaModel::Kind::kIndependence:
      return u.prod();
    case CopulaModel::Kind::kGaussian:
      return gaussian_copula_cdf(copula, u);
  }
  return 0.0;  // unreachable
}

double log_copula_density(const CopulaModel& copula,
                          const Eigen::VectorXd& u) {
  if (u.size() != copula.dimension()) {
    throw std::invalid_argument("copula_density: dimension mismatch");
  }
  check_unit_cube(u);
  if (copula.kind() == CopulaModel::Kind::kIndependence) return 0.0;

  const Eigen::VectorXd v = clamp_interior(u);
  Eigen::VectorXd q(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) q[i] = normal_quantile(v[i]);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(copula.correlation());
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("copula_density: correlation factorization failed");
  }
  const Eigen::VectorXd d = ldlt.vectorD();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw NumericalError("copula_density: correlation matrix is singular");
    }
    log_det += std::log(d[i]);
  }
  const Eigen::VectorXd solved = ldlt.solve(q);
  return -0.5 * log_det - 0.5 * (q.dot(solved) - q.squaredNorm());
}

double copula_density(const CopulaModel& copula, const Eigen::VectorXd& u) {
  return std::exp(log_copula_density(copula, u));
}

namespace {

void check_dimensions(const CopulaModel& copula,
                      const std::vector<MarginalModel>& marginals,
                      const HeterogeneousSample& z, const char* where) {
  if (static_cast<int>(marginals.size()) != copula.dimension() ||
      z.size() != copula.dimension()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

double joint_cdf(const CopulaModel& copula,
                 const std::vector<MarginalModel>& marginals,
                 const HeterogeneousSample& z) {
  check_dimensions(copula, marginals, z, "joint_cdf");
  Eigen::VectorXd u(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) u[i] = marginals[i].cdf(z[i]);
  return copula_cdf(copula, u);
}

double log_joint_pdf(const CopulaModel& copula,
                     const std::vector<MarginalModel>& marginals,
                     const HeterogeneousSample& z) {
  check_dimensions(copula, marginals, z, "joint_pdf");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    acc += marginals[i].log_pdf(z[i]);
  }
  if (copula.kind() != CopulaModel::Kind::kIndependence) {
    Eigen::VectorXd u(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) u[i] = marginals[i].cdf(z[i]);
    acc += log_copula_density(copula, u);
  }
  return acc;
}

double joint_pdf(const CopulaModel& copula,
                 const std::vector<MarginalModel>& marginals,
                 const HeterogeneousSample& z) {
  return std::exp(log_joint_pdf(copula, marginals, z));
}

double log_likelihood_ratio(const Hypothesis& h0, const Hypothesis& h1,
                            const HeterogeneousSample& z) {
  const double l0 = log_joint_pdf(h0.copula, h0.marginals, z);
  const double l1 = log_joint_pdf(h1.copula, h1.marginals, z);
  if (l0 == kNegInf && l1 == kNegInf) {
    throw NumericalError(
        "log_likelihood_ratio: undefined ratio, density is zero under both "
        "hypotheses");
  }
  return l1 - l0;
}

}  // namespace crowdsense
