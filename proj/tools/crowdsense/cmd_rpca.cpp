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
#include "crowdsense/lowrank.hpp"

namespace crowdsense::cli {

void run_rpca(RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  check_keys(ctx.config,
             {"input", "mask", "algorithm", "lambda", "epsilon", "mu_init",
              "mu_growth", "max_iters", "rel_tol"},
             "rpca config");
  const Eigen::MatrixXd y = read_csv_matrix(
      ctx.resolve(require_string(ctx.config, "input", "rpca config")));

  const bool masked = ctx.config.contains("mask");
  ObservationMask mask = ObservationMask::full(y.rows(), y.cols());
  if (masked) {
    mask = read_csv_mask(
        ctx.resolve(require_string(ctx.config, "mask", "rpca config")),
        y.rows(), y.cols());
  }

  SolverConfig solver = masked ? SolverConfig::for_masked(y, mask)
                               : SolverConfig::for_matrix(y);
  const double lambda = get_number(ctx.config, "lambda", solver.lambda);
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("field lambda must be > 0");
  }
  solver.lambda = lambda;
  solver.epsilon = get_number(ctx.config, "epsilon", solver.epsilon);
  solver.mu_init = get_number(ctx.config, "mu_init", solver.mu_init);
  solver.mu_growth = get_number(ctx.config, "mu_growth", solver.mu_growth);
  solver.max_iters = get_int(ctx.config, "max_iters", solver.max_iters);
  solver.rel_tol = get_number(ctx.config, "rel_tol", solver.rel_tol);

  const std::string algorithm = get_string(ctx.config, "algorithm", "robust");
  Decomposition result;
  if (algorithm == "stable") {
    result = stable_pca(y, solver);
  } else if (algorithm == "robust") {
    result = masked ? robust_completion(y, mask, solver) : robust_pca(y, solver);
  } else {
    throw std::invalid_argument("field algorithm must be robust or stable, "
                                "got: " + algorithm);
  }

  write_csv_matrix(ctx.out_dir / "X.csv", result.low_rank);
  write_csv_matrix(ctx.out_dir / "A.csv", result.sparse);

  nlohmann::json diag;
  diag["iterations"] = result.iterations;
  diag["converged"] = result.converged;
  diag["final_residual"] = result.final_residual;
  diag["residual_trace"] = result.residual_trace;
  diag["lambda"] = solver.lambda;
  diag["epsilon"] = solver.epsilon;
  diag["mu_init"] = solver.mu_init;
  diag["mu_growth"] = solver.mu_growth;
  write_text(ctx.out_dir / "diagnostics.json", diag.dump(2) + "\n");
  ctx.log("rpca: wrote X.csv, A.csv, diagnostics.json (" +
          std::to_string(result.iterations) + " iterations)");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(ctx, "rpca", ctx.config, wall);
}

}  // namespace crowdsense::cli
