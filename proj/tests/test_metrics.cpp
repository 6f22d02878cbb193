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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crowdsense/metrics.hpp"

using namespace crowdsense;

TEST_CASE("qoi score") {
  QoIRecord best;
  CHECK(qoi_score(best) == 1.0);

  QoIRecord dead = best;
  dead.recall = 0.0;
  CHECK(qoi_score(dead) == 0.0);

  QoIRecord nines;
  nines.quantity = nines.precision = nines.recall = nines.accuracy =
      nines.detail = nines.timeliness = nines.validity = 0.9;
  CHECK(qoi_score(nines) == doctest::Approx(std::pow(0.9, 7)).epsilon(1e-12));

  QoIRecord bad = best;
  bad.timeliness = 1.2;
  CHECK_THROWS_AS(qoi_score(bad), std::invalid_argument);
}

TEST_CASE("qoi score properties (random records)") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    QoIRecord r;
    r.quantity = unit(rng);
    r.precision = unit(rng);
    r.recall = unit(rng);
    r.accuracy = unit(rng);
    r.detail = unit(rng);
    r.timeliness = unit(rng);
    r.validity = unit(rng);
    const double score = qoi_score(r);
    CHECK(score >= 0.0);
    CHECK(score <= 1.0);
    const double least =
        std::min({r.quantity, r.precision, r.recall, r.accuracy, r.detail,
                  r.timeliness, r.validity});
    CHECK(score <= least + 1e-15);
    // monotone in each factor
    QoIRecord bumped = r;
    bumped.accuracy = std::min(1.0, r.accuracy + 0.1);
    CHECK(qoi_score(bumped) >= score);
  }
}

TEST_CASE("qod score") {
  QoDRecord best;
  CHECK(qod_score(best) == 1.0);
  QoDRecord dead = best;
  dead.completeness = 0.0;
  CHECK(qod_score(dead) == 0.0);
  QoDRecord nines{0.9, 0.9, 0.9, 0.9};
  CHECK(qod_score(nines) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("timeliness") {
  CHECK(timeliness(0.0, 10.0) == 1.0);
  CHECK(timeliness(10.0, 10.0) == doctest::Approx(0.5));
  CHECK(timeliness(1e12 * 10.0, 10.0) < 1e-11);
  // strictly decreasing, continuous
  double prev = 1.0;
  for (double d = 0.25; d < 50.0; d += 0.25) {
    const double t = timeliness(d, 10.0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(timeliness(1e-9, 10.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(timeliness(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(timeliness(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("completeness") {
  CHECK(completeness(100.0, 100.0) == 1.0);
  CHECK(completeness(50.0, 100.0) == 0.5);
  CHECK(completeness(120.0, 100.0) == 1.0);
  CHECK_THROWS_AS(completeness(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("provisioning level") {
  ProvisioningLevels all_on;
  CHECK(provisioning_level(all_on) == 1.0);

  ProvisioningLevels one;
  one.access = 1.0;
  one.communication = one.computation = one.application = 0.0;
  CHECK(provisioning_level(one) == doctest::Approx(0.25));

  ProvisioningLevels weighted;
  weighted.access = 0.5;
  weighted.communication = 1.0;
  weighted.computation = 1.0;
  weighted.application = 0.0;
  weighted.weights = {0.4, 0.3, 0.2, 0.1};
  CHECK(provisioning_level(weighted) == doctest::Approx(0.7).epsilon(1e-12));

  ProvisioningLevels bad;
  bad.weights = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(provisioning_level(bad), std::invalid_argument);
}

TEST_CASE("qoe mappings") {
  const auto linear = QoEMapping::linear();
  CHECK(qoe_map(linear, 0.3) == 0.3);

  const auto step = QoEMapping::step(0.5);
  CHECK(qoe_map(step, 0.49) == 0.0);
  CHECK(qoe_map(step, 0.5) == 1.0);

  const auto sigmoid = QoEMapping::sigmoid(0.5, 10.0);
  CHECK(qoe_map(sigmoid, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qoe_map(sigmoid, 0.0) == 0.0);
  CHECK(qoe_map(sigmoid, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  // nondecreasing on a dense grid, outputs within [0, 1]
  for (const auto& mapping :
       {linear, step, sigmoid, QoEMapping::sigmoid(0.2, 3.0),
        QoEMapping::step(0.0)}) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double s = static_cast<double>(i) / 1000.0;
      const double q = qoe_map(mapping, s);
      CHECK(q >= prev - 1e-15);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0 + 1e-15);
      prev = q;
    }
  }
  CHECK_THROWS_AS(QoEMapping::sigmoid(1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(qoe_map(linear, 1.5), std::invalid_argument);
}

TEST_CASE("resource cost record") {
  ResourceCost ok;
  ok.check_valid();
  ResourceCost bad;
  bad.energy = -0.1;
  CHECK_THROWS_AS(bad.check_valid(), std::invalid_argument);
}
