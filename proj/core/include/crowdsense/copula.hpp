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
// Joint distributions for heterogeneous sensor data: per-sensor marginal
// models coupled through a copula. The joint cdf is the copula applied to
// the marginal cdf values; the joint pdf is the product of marginal pdfs
// reweighted by the copula density.

#ifndef CROWDSENSE_COPULA_HPP_
#define CROWDSENSE_COPULA_HPP_

#include <Eigen/Dense>
#include <vector>

#include "crowdsense/error.hpp"

namespace crowdsense {

// One observation vector, one entry per sensor.
using HeterogeneousSample = Eigen::VectorXd;

// Per-sensor univariate distribution. Parametric kinds evaluate closed
// forms; the empirical kind uses a clamped rank transform for the cdf
// (rank/(n+1), clamped to [1/(n+1), n/(n+1)] so copula quantile transforms
// stay finite) and a Gaussian KDE with Silverman bandwidth for the pdf.
// cdf(-inf) and cdf(+inf) are exactly 0 and 1 for every kind.
class MarginalModel {
 public:
  enum class Kind { kEmpirical, kGaussian, kExponential };

  static MarginalModel gaussian(double mean, double stddev);
  static MarginalModel exponential(double rate);
  // Fits an empirical model; requires at least 2 finite samples.
  static MarginalModel empirical(std::vector<double> samples);

  Kind kind() const { return kind_; }
  double cdf(double z) const;
  double pdf(double z) const;
  double log_pdf(double z) const;

  double mean() const { return mean_; }
  double stddev() const { return stddev_; }
  double rate() const { return rate_; }
  const std::vector<double>& samples() const { return samples_; }
  double kde_bandwidth() const { return bandwidth_; }

 private:
  MarginalModel() = default;

  Kind kind_ = Kind::kGaussian;
  double mean_ = 0.0;
  double stddev_ = 1.0;
  double rate_ = 1.0;
  std::vector<double> samples_;  // sorted, empirical kind only
  double bandwidth_ = 0.0;
};

// fit_empirical_marginal(samples) — alias for MarginalModel::empirical.
MarginalModel fit_empirical_marginal(std::vector<double> samples);

double eval_marginal_cdf(const MarginalModel& model, double z);

// Dependence structure on [0,1]^N. The family set is sealed: adding one
// means extending Kind and every switch in the implementation.
class CopulaModel {
 public:
  enum class Kind { kIndependence, kGaussian };

  static CopulaModel independence(int dimension);
  // Requires a symmetric matrix with unit diagonal, entries in [-1, 1] and
  // smallest eigenvalue >= -1e-10.
  static CopulaModel gaussian(Eigen::MatrixXd correlation);

  Kind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const Eigen::MatrixXd& correlation() const { return correlation_; }

 private:
  CopulaModel() = default;

  Kind kind_ = Kind::kIndependence;
  int dimension_ = 0;
  Eigen::MatrixXd correlation_;
};

// Copula cdf C(u). For the Gaussian family the bivariate case is evaluated
// with the Drezner-Wesolowsky-Genz scheme (abs. error ~1e-15); dimensions
// >= 3 fall back to a fixed-seed Monte Carlo estimate (~1e-3).
double copula_cdf(const CopulaModel& copula, const Eigen::VectorXd& u);

// Copula density c(u), u in the open unit cube; boundary coordinates are
// clamped inward by 1e-12.
double copula_density(const CopulaModel& copula, const Eigen::VectorXd& u);
double log_copula_density(const CopulaModel& copula, const Eigen::VectorXd& u);

double joint_cdf(const CopulaModel& copula,
                 const std::vector<MarginalModel>& marginals,
                 const HeterogeneousSample& z);

double joint_pdf(const CopulaModel& copula,
                 const std::vector<MarginalModel>& marginals,
                 const HeterogeneousSample& z);

double log_joint_pdf(const CopulaModel& copula,
                     const std::vector<MarginalModel>& marginals,
                     const HeterogeneousSample& z);

// A candidate joint model for likelihood-ratio fusion.
struct Hypothesis {
  CopulaModel copula;
  std::vector<MarginalModel> marginals;
};

// log f(z | h1) - log f(z | h0). Antisymmetric under swap. Throws
// NumericalError if the density vanishes under both hypotheses.
double log_likelihood_ratio(const Hypothesis& h0, const Hypothesis& h1,
                            const HeterogeneousSample& z);

}  // namespace crowdsense

#endif  // CROWDSENSE_COPULA_HPP_
