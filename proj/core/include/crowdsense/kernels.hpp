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
// Kernel functions, Gram matrices and kernel ridge regression. Points are
// rows of an Eigen matrix.

#ifndef CROWDSENSE_KERNELS_HPP_
#define CROWDSENSE_KERNELS_HPP_

#include <Eigen/Dense>

namespace crowdsense {

struct KernelSpec {
  enum class Kind { kPolynomial, kGaussian };

  // (<x,y> + offset)^degree
  static KernelSpec polynomial(int degree, double offset);
  // exp(-|x-y|^2 / (2 bandwidth^2))
  static KernelSpec gaussian(double bandwidth);

  Kind kind = Kind::kGaussian;
  int degree = 1;
  double offset = 0.0;
  double bandwidth = 1.0;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// Pairwise kernel matrix. Entries are computed once per (i, j) pair and
// mirrored, so symmetry holds to the bit.
struct GramMatrix {
  Eigen::MatrixXd entries;
  KernelSpec spec;
};

GramMatrix gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& points);

// Kernel ridge regression in the dual: coefficients solve (K + gamma I) a = y.
struct RidgeModel {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd coefficients;
  double gamma = 0.0;
  KernelSpec spec;
};

RidgeModel ridge_fit(const KernelSpec& spec, const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& targets, double gamma);

double ridge_predict(const RidgeModel& model,
                     const Eigen::Ref<const Eigen::VectorXd>& x);

// One prediction per row of `points`.
Eigen::VectorXd ridge_predict_batch(const RidgeModel& model,
                                    const Eigen::MatrixXd& points);

}  // namespace crowdsense

#endif  // CROWDSENSE_KERNELS_HPP_
