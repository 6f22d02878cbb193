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
#include "crowdsense/io.hpp"
#include "crowdsense/kernels.hpp"

namespace crowdsense::cli {

namespace {

KernelSpec parse_kernel(const nlohmann::json& spec) {
  check_keys(spec, {"kind", "degree", "offset", "bandwidth"}, "kernel");
  const std::string kind = require_string(spec, "kind", "kernel");
  if (kind == "gaussian") {
    return KernelSpec::gaussian(require_number(spec, "bandwidth", "kernel"));
  }
  if (kind == "polynomial") {
    return KernelSpec::polynomial(get_int(spec, "degree", 1),
                                  get_number(spec, "offset", 0.0));
  }
  throw std::invalid_argument("kernel kind must be gaussian or polynomial, "
                              "got: " + kind);
}

}  // namespace

void run_kernel(RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  check_keys(ctx.config,
             {"kernel", "task", "input", "targets", "test_input", "gamma"},
             "kernel config");
  if (!ctx.config.contains("kernel")) {
    throw std::invalid_argument("kernel config requires field kernel");
  }
  const KernelSpec spec = parse_kernel(ctx.config["kernel"]);
  const std::string task = get_string(ctx.config, "task", "gram");
  const Eigen::MatrixXd points = read_csv_matrix(
      ctx.resolve(require_string(ctx.config, "input", "kernel config")));

  if (task == "gram") {
    const GramMatrix gram = gram_matrix(spec, points);
    write_csv_matrix(ctx.out_dir / "gram.csv", gram.entries);
    ctx.log("kernel: wrote gram.csv");
  } else if (task == "predict") {
    const Eigen::MatrixXd target_matrix = read_csv_matrix(
        ctx.resolve(require_string(ctx.config, "targets", "kernel config")));
    if (target_matrix.cols() != 1 || target_matrix.rows() != points.rows()) {
      throw std::invalid_argument(
          "field targets must be a single column matching the input rows");
    }
    const double gamma = require_number(ctx.config, "gamma", "kernel config");
    const RidgeModel model =
        ridge_fit(spec, points, target_matrix.col(0), gamma);
    const Eigen::MatrixXd test_points = read_csv_matrix(ctx.resolve(
        require_string(ctx.config, "test_input", "kernel config")));
    const Eigen::VectorXd predictions = ridge_predict_batch(model, test_points);
    write_csv_matrix(ctx.out_dir / "predictions.csv", predictions);
    ctx.log("kernel: wrote predictions.csv");
  } else {
    throw std::invalid_argument("field task must be gram or predict, got: " +
                                task);
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(ctx, "kernel", ctx.config, wall);
}

}  // namespace crowdsense::cli
