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

#ifndef CROWDSENSE_NORMAL_HPP_
#define CROWDSENSE_NORMAL_HPP_

namespace crowdsense {

// Standard normal density.
double normal_pdf(double z);

// Standard normal cdf, accurate over the full double range (erfc based).
double normal_cdf(double z);

// Inverse of normal_cdf on (0, 1). Rational initial guess refined with one
// Halley step against the erfc-based cdf; absolute error is at machine
// precision for u in [1e-300, 1 - 1e-16]. u <= 0 maps to -inf, u >= 1 to
// +inf.
double normal_quantile(double u);

// Lower cdf of the standard bivariate normal, P(Z1 <= h, Z2 <= k) with
// correlation rho. Gauss-Legendre scheme of Drezner & Wesolowsky as refined
// by Genz; absolute accuracy ~1e-15.
double bivariate_normal_cdf(double h, double k, double rho);

}  // namespace crowdsense

#endif  // CROWDSENSE_NORMAL_HPP_
