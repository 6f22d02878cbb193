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
// Quality scores for data, information and user experience. All factors are
// normalized to [0, 1] with 1 the best case.

#ifndef CROWDSENSE_METRICS_HPP_
#define CROWDSENSE_METRICS_HPP_

#include <array>

namespace crowdsense {

struct QoDRecord {
  double accuracy = 1.0;
  double truthfulness = 1.0;
  double completeness = 1.0;
  double up_to_dateness = 1.0;

  void check_valid() const;
};

struct QoIRecord {
  double quantity = 1.0;    // Q
  double precision = 1.0;   // P
  double recall = 1.0;      // R
  double accuracy = 1.0;    // A
  double detail = 1.0;      // D
  double timeliness = 1.0;  // T
  double validity = 1.0;    // V

  void check_valid() const;
};

// Product of the seven factors.
double qoi_score(const QoIRecord& record);

// Geometric mean of the four factors, so a zero factor annihilates the
// score the same way it does for QoI.
double qod_score(const QoDRecord& record);

// 1 at zero delay, then 1 / (1 + delay/scale); strictly decreasing.
double timeliness(double delay_seconds, double scale_seconds);

// min(collected / required, 1).
double completeness(double collected, double required);

// Service-provisioning level to experience curve; nondecreasing [0,1]->[0,1].
struct QoEMapping {
  enum class Kind { kLinear, kSigmoid, kStep };

  static QoEMapping linear();
  // Logistic curve rescaled so the endpoints are exactly 0 and 1.
  static QoEMapping sigmoid(double center, double steepness);
  // 0 below the threshold, 1 at or above it (inelastic demand).
  static QoEMapping step(double threshold);

  Kind kind = Kind::kLinear;
  double center = 0.5;
  double steepness = 1.0;
  double threshold = 0.5;
};

double qoe_map(const QoEMapping& mapping, double provisioning);

// The four provisioning levels with aggregation weights (nonnegative,
// summing to 1).
struct ProvisioningLevels {
  double access = 1.0;
  double communication = 1.0;
  double computation = 1.0;
  double application = 1.0;
  std::array<double, 4> weights = {0.25, 0.25, 0.25, 0.25};

  void check_valid() const;
};

double provisioning_level(const ProvisioningLevels& levels);

// Cost-dimension efficiency scores; a record, not a computed quantity.
struct ResourceCost {
  double device_utilization = 1.0;
  double computational = 1.0;
  double energy = 1.0;
  double storage = 1.0;

  void check_valid() const;
};

}  // namespace crowdsense

#endif  // CROWDSENSE_METRICS_HPP_
