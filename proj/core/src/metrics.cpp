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

#include "crowdsense/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crowdsense {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

void QoDRecord::check_valid() const {
  check_unit(accuracy, "QoDRecord.accuracy");
  check_unit(truthfulness, "QoDRecord.truthfulness");
  check_unit(completeness, "QoDRecord.completeness");
  check_unit(up_to_dateness, "QoDRecord.up_to_dateness");
}

void QoIRecord::check_valid() const {
  check_unit(quantity, "QoIRecord.quantity");
  check_unit(precision, "QoIRecord.precision");
  check_unit(recall, "QoIRecord.recall");
  check_unit(accuracy, "QoIRecord.accuracy");
  check_unit(detail, "QoIRecord.detail");
  check_unit(timeliness, "QoIRecord.timeliness");
  check_unit(validity, "QoIRecord.validity");
}

double qoi_score(const QoIRecord& record) {
  record.check_valid();
  return record.quantity * record.precision * record.recall * record.accuracy *
         record.detail * record.timeliness * record.validity;
}

double qod_score(const QoDRecord& record) {
  record.check_valid();
  const double product = record.accuracy * record.truthfulness *
                         record.completeness * record.up_to_dateness;
  return std::pow(product, 0.25);
}

double timeliness(double delay_seconds, double scale_seconds) {
  if (delay_seconds < 0.0) {
    throw std::invalid_argument("timeliness: delay must be >= 0");
  }
  if (!(scale_seconds > 0.0)) {
    throw std::invalid_argument("timeliness: scale must be > 0");
  }
  if (delay_seconds == 0.0) return 1.0;
  return 1.0 / (1.0 + delay_seconds / scale_seconds);
}

double completeness(double collected, double required) {
  if (collected < 0.0) {
    throw std::invalid_argument("completeness: collected must be >= 0");
  }
  if (!(required > 0.0)) {
    throw std::invalid_argument("completeness: required must be > 0");
  }
  const double ratio = collected / required;
  return ratio > 1.0 ? 1.0 : ratio;
}

QoEMapping QoEMapping::linear() { return {}; }

QoEMapping QoEMapping::sigmoid(double center, double steepness) {
  if (!(center >= 0.0 && center <= 1.0)) {
    throw std::invalid_argument("QoEMapping::sigmoid: center must lie in [0, 1]");
  }
  if (!(steepness > 0.0)) {
    throw std::invalid_argument("QoEMapping::sigmoid: steepness must be > 0");
  }
  QoEMapping m;
  m.kind = Kind::kSigmoid;
  m.center = center;
  m.steepness = steepness;
  return m;
}

QoEMapping QoEMapping::step(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("QoEMapping::step: threshold must lie in [0, 1]");
  }
  QoEMapping m;
  m.kind = Kind::kStep;
  m.threshold = threshold;
  return m;
}

double qoe_map(const QoEMapping& mapping, double provisioning) {
  check_unit(provisioning, "qoe_map: provisioning");
  switch (mapping.kind) {
    case QoEMapping::Kind::kLinear:
      return provisioning;
    case QoEMapping::Kind::kSigmoid: {
      const auto logistic = [&](double s) {
        return 1.0 / (1.0 + std::exp(-mapping.steepness * (s - mapping.center)));
      };
      const double lo = logistic(0.0);
      const double hi = logistic(1.0);
      return (logistic(provisioning) - lo) / (hi - lo);
    }
    case QoEMapping::Kind::kStep:
      return provisioning >= mapping.threshold ? 1.0 : 0.0;
  }
  return 0.0;  // unreachable
}

void ProvisioningLevels::check_valid() const {
  check_unit(access, "ProvisioningLevels.access");
  check_unit(communication, "ProvisioningLevels.communication");
  check_unit(computation, "ProvisioningLevels.computation");
  check_unit(application, "ProvisioningLevels.application");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) {
      throw std::invalid_argument("ProvisioningLevels: negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("ProvisioningLevels: weights must sum to 1");
  }
}

double provisioning_level(const ProvisioningLevels& levels) {
  levels.check_valid();
  return levels.weights[0] * levels.access +
         levels.weights[1] * levels.communication +
         levels.weights[2] * levels.computation +
         levels.weights[3] * levels.application;
}

void ResourceCost::check_valid() const {
  check_unit(device_utilization, "ResourceCost.device_utilization");
  check_unit(computational, "ResourceCost.computational");
  check_unit(energy, "ResourceCost.energy");
  check_unit(storage, "ResourceCost.storage");
}

}  // namespace crowdsense
