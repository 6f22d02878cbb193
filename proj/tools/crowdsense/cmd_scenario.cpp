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
#include <numeric>

#include "commands.hpp"
#include "crowdsense/error.hpp"
#include "crowdsense/io.hpp"
#include "crowdsense/scenario.hpp"

namespace crowdsense::cli {

namespace {

ScenarioConfig parse_scenario(const nlohmann::json& spec) {
  check_keys(spec,
             {"network", "slots", "rank", "crowdsource", "solver", "drivers",
              "game_slot", "learner", "outlier_tau", "report", "seeds"},
             "scenario config");
  ScenarioConfig cfg;
  if (spec.contains("network")) {
    const auto& net = spec["network"];
    check_keys(net,
               {"components", "corridors", "hops", "free_flow_time",
                "congestion_slope", "max_routes_per_pair"},
               "network");
    cfg.components = get_int(net, "components", cfg.components);
    cfg.corridors = get_int(net, "corridors", cfg.corridors);
    cfg.hops = get_int(net, "hops", cfg.hops);
    cfg.free_flow_time = get_number(net, "free_flow_time", cfg.free_flow_time);
    cfg.congestion_slope =
        get_number(net, "congestion_slope", cfg.congestion_slope);
    cfg.max_routes_per_pair =
        get_int(net, "max_routes_per_pair", cfg.max_routes_per_pair);
  }
  cfg.slots = get_int(spec, "slots", cfg.slots);
  cfg.rank = get_int(spec, "rank", cfg.rank);
  if (spec.contains("crowdsource")) {
    const auto& crowd = spec["crowdsource"];
    check_keys(crowd,
               {"sampling_rate", "noise_std", "anomaly_rate",
                "anomaly_magnitude", "contributors", "dishonest"},
               "crowdsource");
    const int contributors =
        get_int(crowd, "contributors", cfg.crowdsource.contributors);
    const int dishonest = get_int(crowd, "dishonest", 1);
    cfg.crowdsource = CrowdsourceModel::with_dishonest(contributors, dishonest);
    cfg.crowdsource.sampling_rate =
        get_number(crowd, "sampling_rate", 0.5);
    cfg.crowdsource.noise_std = get_number(crowd, "noise_std", 0.05);
    cfg.crowdsource.anomaly_rate = get_number(crowd, "anomaly_rate", 0.3);
    cfg.crowdsource.anomaly_magnitude =
        get_number(crowd, "anomaly_magnitude", 10.0);
  }
  if (spec.contains("solver")) {
    const auto& solver = spec["solver"];
    check_keys(solver, {"lambda", "epsilon", "max_iters"}, "solver");
    cfg.lambda = get_number(solver, "lambda", cfg.lambda);
    cfg.epsilon = get_number(solver, "epsilon", cfg.epsilon);
    cfg.solver_max_iters = get_int(solver, "max_iters", cfg.solver_max_iters);
  }
  cfg.drivers = get_int(spec, "drivers", cfg.drivers);
  cfg.game_slot = get_int(spec, "game_slot", cfg.game_slot);
  if (spec.contains("learner")) {
    const auto& learner = spec["learner"];
    check_keys(learner, {"step_size", "horizon", "outage_eta"}, "learner");
    cfg.learn_step = get_number(learner, "step_size", cfg.learn_step);
    cfg.learn_horizon = get_int(learner, "horizon", cfg.learn_horizon);
    cfg.outage_eta = get_number(learner, "outage_eta", cfg.outage_eta);
  }
  cfg.outlier_tau = get_number(spec, "outlier_tau", cfg.outlier_tau);
  if (spec.contains("report")) {
    const auto& report = spec["report"];
    check_keys(report, {"delay_seconds", "delay_scale"}, "report");
    cfg.report_delay_seconds =
        get_number(report, "delay_seconds", cfg.report_delay_seconds);
    cfg.report_delay_scale =
        get_number(report, "delay_scale", cfg.report_delay_scale);
  }
  return cfg;
}

}  // namespace

void run_scenario(RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = parse_scenario(ctx.config);

  std::vector<std::uint64_t> seeds;
  if (ctx.config.contains("seeds")) {
    if (!ctx.config["seeds"].is_array() || ctx.config["seeds"].empty()) {
      throw std::invalid_argument("field seeds must be a nonempty array");
    }
    for (const auto& s : ctx.config["seeds"]) {
      seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    seeds.push_back(ctx.seed);
  }

  const auto reports_dir = ctx.out_dir / "reports";
  std::error_code ec;
  std::filesystem::create_directories(reports_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory: " + reports_dir.string());
  }

  std::vector<double> seed_col, err_col, nash_col, converged_col, qod_col,
      qoi_col, travel_col, outage_col, precision_col, recall_col;
  nlohmann::json timings = nlohmann::json::object();
  for (const std::uint64_t seed : seeds) {
    const ScenarioReport report = crowdsense::run_scenario(cfg, seed);
    write_text(reports_dir / ("seed_" + std::to_string(seed) + ".json"),
               report.to_json());
    seed_col.push_back(static_cast<double>(seed));
    err_col.push_back(report.recovery_relative_error);
    nash_col.push_back(report.learned_profile_is_nash ? 1.0 : 0.0);
    converged_col.push_back(report.learning_converged ? 1.0 : 0.0);
    qod_col.push_back(report.qod_score_value);
    qoi_col.push_back(report.qoi_score_value);
    travel_col.push_back(
        std::accumulate(report.expected_travel_time.begin(),
                        report.expected_travel_time.end(), 0.0) /
        static_cast<double>(report.expected_travel_time.size()));
    outage_col.push_back(std::accumulate(report.outage.begin(),
                                         report.outage.end(), 0.0) /
                         static_cast<double>(report.outage.size()));
    precision_col.push_back(report.flagging_precision);
    recall_col.push_back(report.flagging_recall);
    nlohmann::json stage = nlohmann::json::object();
    for (const auto& [name, seconds] : report.stage_seconds) {
      stage[name] = seconds;
    }
    timings[std::to_string(seed)] = stage;
    ctx.log("scenario seed " + std::to_string(seed) + ": recovery error " +
            format_double(report.recovery_relative_error) + ", NE " +
            (report.learned_profile_is_nash ? "yes" : "no"));
  }

  write_csv_columns(
      ctx.out_dir / "aggregate.csv",
      {"seed", "recovery_relative_error", "profile_is_nash",
       "learning_converged", "qod_score", "qoi_score", "mean_travel_time",
       "mean_outage", "flagging_precision", "flagging_recall"},
      {seed_col, err_col, nash_col, converged_col, qod_col, qoi_col, travel_col,
       outage_col, precision_col, recall_col});

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  nlohmann::json resolved = ctx.config;
  resolved["seeds"] = seeds;
  // stage timings live here, outside the canonical per-seed reports
  nlohmann::json manifest_config = resolved;
  write_manifest(ctx, "scenario", manifest_config, wall);
  nlohmann::json timing_doc;
  timing_doc["per_seed_stage_seconds"] = timings;
  write_text(ctx.out_dir / "timings.json", timing_doc.dump(2) + "\n");
}

}  // namespace crowdsense::cli
