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

#include <chrono>

#include "commands.hpp"
#include "crowdsense/metrics.hpp"

namespace crowdsense::cli {

void run_metrics(RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  check_keys(ctx.config,
             {"qoi", "qod", "provisioning", "qoe_mapping", "timeliness",
              "completeness"},
             "metrics config");
  nlohmann::json scores;

  if (ctx.config.contains("qoi")) {
    const auto& spec = ctx.config["qoi"];
    check_keys(spec,
               {"quantity", "precision", "recall", "accuracy", "detail",
                "timeliness", "validity"},
               "qoi");
    QoIRecord record;
    record.quantity = get_number(spec, "quantity", 1.0);
    record.precision = get_number(spec, "precision", 1.0);
    record.recall = get_number(spec, "recall", 1.0);
    record.accuracy = get_number(spec, "accuracy", 1.0);
    record.detail = get_number(spec, "detail", 1.0);
    record.timeliness = get_number(spec, "timeliness", 1.0);
    record.validity = get_number(spec, "validity", 1.0);
    scores["qoi_score"] = qoi_score(record);
  }

  if (ctx.config.contains("qod")) {
    const auto& spec = ctx.config["qod"];
    check_keys(spec, {"accuracy", "truthfulness", "completeness",
                      "up_to_dateness"},
               "qod");
    QoDRecord record;
    record.accuracy = get_number(spec, "accuracy", 1.0);
    record.truthfulness = get_number(spec, "truthfulness", 1.0);
    record.completeness = get_number(spec, "completeness", 1.0);
    record.up_to_dateness = get_number(spec, "up_to_dateness", 1.0);
    scores["qod_score"] = qod_score(record);
  }

  double provisioning = -1.0;
  if (ctx.config.contains("provisioning")) {
    const auto& spec = ctx.config["provisioning"];
    check_keys(spec, {"access", "communication", "computation", "application",
                      "weights"},
               "provisioning");
    ProvisioningLevels levels;
    levels.access = get_number(spec, "access", 1.0);
    levels.communication = get_number(spec, "communication", 1.0);
    levels.computation = get_number(spec, "computation", 1.0);
    levels.application = get_number(spec, "application", 1.0);
    if (spec.contains("weights")) {
      if (!spec["weights"].is_array() || spec["weights"].size() != 4) {
        throw std::invalid_argument("field weights must hold four numbers");
      }
      for (int i = 0; i < 4; ++i) {
        levels.weights[static_cast<std::size_t>(i)] =
            spec["weights"][i].get<double>();
      }
    }
    provisioning = provisioning_level(levels);
    scores["provisioning_level"] = provisioning;
  }

  if (ctx.config.contains("qoe_mapping")) {
    const auto& spec = ctx.config["qoe_mapping"];
    check_keys(spec, {"kind", "center", "steepness", "threshold"},
               "qoe_mapping");
    const std::string kind = require_string(spec, "kind", "qoe_mapping");
    QoEMapping mapping;
    if (kind == "linear") {
      mapping = QoEMapping::linear();
    } else if (kind == "sigmoid") {
      mapping = QoEMapping::sigmoid(require_number(spec, "center", "qoe_mapping"),
                                    require_number(spec, "steepness",
                                                   "qoe_mapping"));
    } else if (kind == "step") {
      mapping = QoEMapping::step(require_number(spec, "threshold",
                                                "qoe_mapping"));
    } else {
      throw std::invalid_argument(
          "qoe_mapping kind must be linear, sigmoid or step, got: " + kind);
    }
    if (provisioning < 0.0) {
      throw std::invalid_argument(
          "qoe_mapping requires a provisioning section to map");
    }
    scores["qoe"] = qoe_map(mapping, provisioning);
  }

  if (ctx.config.contains("timeliness")) {
    const auto& spec = ctx.config["timeliness"];
    check_keys(spec, {"delay", "scale"}, "timeliness");
    scores["timeliness"] =
        timeliness(require_number(spec, "delay", "timeliness"),
                   require_number(spec, "scale", "timeliness"));
  }

  if (ctx.config.contains("completeness")) {
    const auto& spec = ctx.config["completeness"];
    check_keys(spec, {"collected", "required"}, "completeness");
    scores["completeness"] =
        completeness(require_number(spec, "collected", "completeness"),
                     require_number(spec, "required", "completeness"));
  }

  if (scores.empty()) {
    throw std::invalid_argument(
        "metrics config must contain at least one scored section");
  }
  write_text(ctx.out_dir / "scores.json", scores.dump(2) + "\n");
  ctx.log("metrics: wrote scores.json");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(ctx, "metrics", ctx.config, wall);
}

}  // namespace crowdsense::cli
