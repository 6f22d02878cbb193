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

#include "crowdsense/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crowdsense {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kTwoPi = 6.2831853071795864769;

// Acklam's rational approximation for the lower-tail normal quantile,
// u in (0, 0.5].
double quantile_initial_guess(double u) {
  static constexpr double a[6] = {
      -3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[6] = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Lower-tail quantile on (0, 0.5], refined with one Halley step.
double quantile_lower(double u) {
  double x = quantile_initial_guess(u);
  const double e = normal_cdf(x) - u;
  const double du = e * kSqrt2Pi * std::exp(0.5 * x * x);
  if (std::isfinite(du)) {
    x -= du / (1.0 + 0.5 * x * du);
  }
  return x;
}

}  // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_quantile(double u) {
  if (u <= 0.0) return -std::numeric_limits<double>::infinity();
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  // 1 - u is exact for u in [0.5, 1], so the upper tail reuses the lower.
  return u > 0.5 ? -quantile_lower(1.0 - u) : quantile_lower(u);
}

namespace {

struct GaussLegendreRule {
  const double* weights;
  const double* abscissae;  // offsets from 1 on [0, 2]
  int half;
};

constexpr double kW6[3] = {0.1713244923791705, 0.3607615730481384,
                           0.4679139345726904};
constexpr double kX6[3] = {0.9324695142031522, 0.6612093864662647,
                           0.2386191860831970};
constexpr double kW12[6] = {0.04717533638651177, 0.1069393259953183,
                            0.1600783285433464,  0.2031674267230659,
                            0.2334925365383547,  0.2491470458134029};
constexpr double kX12[6] = {0.9815606342467191, 0.9041172563704750,
                            0.7699026741943050, 0.5873179542866171,
                            0.3678314989981802, 0.1252334085114692};
constexpr double kW20[10] = {0.01761400713915212, 0.04060142980038694,
                             0.06267204833410906, 0.08327674157670475,
                             0.1019301198172404,  0.1181945319615184,
                             0.1316886384491766,  0.1420961093183821,
                             0.1491729864726037,  0.1527533871307259};
constexpr double kX20[10] = {0.9931285991850949,  0.9639719272779138,
                             0.9122344282513259,  0.8391169718222188,
                             0.7463319064601508,  0.6360536807265150,
                             0.5108670019508271,  0.3737060887154196,
                             0.2277858511416451,  0.07652652113349733};

GaussLegendreRule rule_for(double abs_r) {
  if (abs_r < 0.3) return {kW6, kX6, 3};
  if (abs_r < 0.75) return {kW12, kX12, 6};
  return {kW20, kX20, 10};
}

// Upper orthant probability P(Z1 > dh, Z2 > dk); Drezner-Wesolowsky-Genz.
double bivariate_normal_upper(double dh, double dk, double r) {
  const double inf = std::numeric_limits<double>::infinity();
  if (dh == inf || dk == inf) return 0.0;
  if (dh == -inf) return dk == -inf ? 1.0 : normal_cdf(-dk);
  if (dk == -inf) return normal_cdf(-dh);
  if (std::abs(r) < 1e-15) return normal_cdf(-dh) * normal_cdf(-dk);

  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;
  const GaussLegendreRule rule = rule_for(std::abs(r));

  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r) / 2.0;
    for (int i = 0; i < rule.half; ++i) {
      for (const double sgn : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sgn * rule.abscissae[i]));
        bvn += rule.weights[i] *
               std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / kTwoPi + normal_cdf(-h) * normal_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (std::abs(r) < 1.0) {
      const double as = 1.0 - r * r;
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 80.0;
      const double asr0 = -(bs / as + hk) / 2.0;
      if (asr0 > -100.0) {
        bvn = a * std::exp(asr0) *
              (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
      }
      if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(kTwoPi) * normal_cdf(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
      }
      a /= 2.0;
      double sum = 0.0;
      for (int i = 0; i < rule.half; ++i) {
        for (const double sgn : {-1.0, 1.0}) {
          const double xi = a * (1.0 + sgn * rule.abscissae[i]);
          const double xs = xi * xi;
          const double asr = -(bs / xs + hk) / 2.0;
          if (asr > -100.0) {
            const double rs = std::sqrt(1.0 - xs);
            const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
            const double ep =
                std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
            sum += rule.weights[i] * std::exp(asr) * (sp - ep);
          }
        }
      }
      bvn = (a * sum - bvn) / kTwoPi;
    }
    if (r > 0.0) {
      bvn += normal_cdf(-std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double l = h < 0.0 ? normal_cdf(k) - normal_cdf(h)
                               : normal_cdf(-h) - normal_cdf(-k);
      bvn = l - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
  return bivariate_normal_upper(-h, -k, rho);
}

}  // namespace crowdsense
