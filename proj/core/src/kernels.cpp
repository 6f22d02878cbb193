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

#include "crowdsense/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "crowdsense/error.hpp"

namespace crowdsense {

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  if (degree < 1) {
    throw std::invalid_argument("KernelSpec::polynomial: degree must be >= 1");
  }
  if (offset < 0.0) {
    throw std::invalid_argument("KernelSpec::polynomial: offset must be >= 0");
  }
  KernelSpec s;
  s.kind = Kind::kPolynomial;
  s.degree = degree;
  s.offset = offset;
  return s;
}

KernelSpec KernelSpec::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0)) {
    throw std::invalid_argument("KernelSpec::gaussian: bandwidth must be > 0");
  }
  KernelSpec s;
  s.kind = Kind::kGaussian;
  s.bandwidth = bandwidth;
  return s;
}

double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  switch (spec.kind) {
    case KernelSpec::Kind::kPolynomial: {
      const double base = x.dot(y) + spec.offset;
      double acc = 1.0;
      for (int i = 0; i < spec.degree; ++i) acc *= base;
      return acc;
    }
    case KernelSpec::Kind::kGaussian: {
      const double sq = (x - y).squaredNorm();
      return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
    }
  }
  return 0.0;  // unreachable
}

GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& points) {
  const auto n = points.rows();
  if (n == 0) {
    throw std::invalid_argument("gram_matrix: empty data");
  }
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = kernel_eval(spec, points.row(i).transpose(),
                                   points.row(j).transpose());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return {std::move(k), spec};
}

RidgeModel ridge_fit(const KernelSpec& spec, const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& targets, double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("ridge_fit: gamma must be > 0");
  }
  if (inputs.rows() != targets.size() || inputs.rows() == 0) {
    throw std::invalid_argument(
        "ridge_fit: inputs and targets must have equal, nonzero count");
  }
  const GramMatrix gram = gram_matrix(spec, inputs);
  Eigen::MatrixXd system = gram.entries;
  system.diagonal().array() += gamma;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("ridge_fit: factorization of K + gamma I failed");
  }
  Eigen::VectorXd alpha = ldlt.solve(targets);
  // One step of iterative refinement keeps the residual contract on
  // ill-conditioned instances.
  alpha += ldlt.solve(targets - system * alpha);
  const double residual = (system * alpha - targets).norm();
  if (residual > 1e-8 * std::max(targets.norm(), 1e-30)) {
    throw NumericalError("ridge_fit: residual exceeds 1e-8 * |y|");
  }
  return {inputs, std::move(alpha), gamma, spec};
}

double ridge_predict(const RidgeModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < model.inputs.rows(); ++i) {
    acc += model.coefficients[i] *
           kernel_eval(model.spec, model.inputs.row(i).transpose(), x);
  }
  return acc;
}

Eigen::VectorXd ridge_predict_batch(const RidgeModel& model,
                                    const Eigen::MatrixXd& points) {
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[i] = ridge_predict(model, points.row(i).transpose());
  }
  return out;
}

}  // namespace crowdsense
