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
#include <map>

#include "commands.hpp"
#include "crowdsense/admm.hpp"
#include "crowdsense/io.hpp"

namespace crowdsense::cli {

namespace {

// Edge list: two-column `a,b` CSV.
Topology load_topology(const std::filesystem::path& path, int agents) {
  const Eigen::MatrixXd table = read_csv_matrix(path);
  if (table.cols() != 2) {
    throw std::invalid_argument("field topology must be a two-column edge list");
  }
  std::vector<std::pair<int, int>> edges;
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    edges.emplace_back(static_cast<int>(table(r, 0)),
                       static_cast<int>(table(r, 1)));
  }
  return Topology(agents, std::move(edges));
}

// Scalar objectives: header `c`, one row per agent. Quadratic objectives:
// header `agent,a0..a{n-1},rhs`, rows grouped by agent id.
std::vector<AgentObjective> load_objectives(const std::filesystem::path& path,
                                            const std::string& kind,
                                            int agents) {
  const Eigen::MatrixXd table = read_csv_matrix(path);
  std::vector<AgentObjective> objectives;
  if (kind == "scalar") {
    if (table.cols() != 1 || table.rows() != agents) {
      throw std::invalid_argument(
          "field objectives must hold one scalar row per agent");
    }
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
      objectives.push_back(AgentObjective::scalar(table(r, 0)));
    }
    return objectives;
  }
  if (kind != "quadratic") {
    throw std::invalid_argument(
        "field objective_kind must be scalar or quadratic, got: " + kind);
  }
  if (table.cols() < 3) {
    throw std::invalid_argument(
        "quadratic objectives need columns agent,a0..,rhs");
  }
  const int dim = static_cast<int>(table.cols()) - 2;
  std::map<int, std::vector<Eigen::Index>> rows_of;
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    rows_of[static_cast<int>(table(r, 0))].push_back(r);
  }
  for (int agent = 0; agent < agents; ++agent) {
    const auto found = rows_of.find(agent);
    if (found == rows_of.end()) {
      throw std::invalid_argument("field objectives misses agent " +
                                  std::to_string(agent));
    }
    const auto& rows = found->second;
    Eigen::MatrixXd b_mat(static_cast<Eigen::Index>(rows.size()), dim);
    Eigen::VectorXd b_vec(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (int d = 0; d < dim; ++d) {
        b_mat(static_cast<Eigen::Index>(i), d) = table(rows[i], 1 + d);
      }
      b_vec[static_cast<Eigen::Index>(i)] = table(rows[i], 1 + dim);
    }
    objectives.push_back(AgentObjective::quadratic(std::move(b_mat),
                                                   std::move(b_vec)));
  }
  return objectives;
}

}  // namespace

void run_admm(RunContext& ctx, const AdmmOverrides& overrides) {
  const auto start = std::chrono::steady_clock::now();
  check_keys(ctx.config,
             {"agents", "topology", "objectives", "objective_kind", "mode",
              "mu", "max_iters", "primal_tol", "dual_tol"},
             "admm config");
  const int agents = get_int(ctx.config, "agents", 0);
  if (agents < 1) {
    throw std::invalid_argument("field agents must be a positive integer");
  }

  Topology topology = Topology::complete(agents);
  if (ctx.config.contains("topology")) {
    topology = load_topology(
        ctx.resolve(require_string(ctx.config, "topology", "admm config")),
        agents);
  }
  const auto objectives = load_objectives(
      ctx.resolve(require_string(ctx.config, "objectives", "admm config")),
      get_string(ctx.config, "objective_kind", "scalar"), agents);

  AdmmConfig admm;
  admm.mu = overrides.mu > 0.0 ? overrides.mu : get_number(ctx.config, "mu", 1.0);
  admm.max_iters = overrides.max_iters > 0
                       ? overrides.max_iters
                       : get_int(ctx.config, "max_iters", 500);
  admm.primal_tol = get_number(ctx.config, "primal_tol", 1e-8);
  admm.dual_tol = get_number(ctx.config, "dual_tol", 1e-8);
  const std::string mode = !overrides.mode.empty()
                               ? overrides.mode
                               : get_string(ctx.config, "mode", "central");
  if (mode == "central") {
    admm.mode = AdmmMode::kCentral;
  } else if (mode == "neighbor") {
    admm.mode = AdmmMode::kNeighbor;
  } else {
    throw std::invalid_argument("field mode must be central or neighbor, "
                                "got: " + mode);
  }

  const ConsensusResult result = run_consensus(objectives, topology, admm);

  std::vector<double> iter_col, primal_col, dual_col, gap_col;
  for (std::size_t k = 0; k < result.state.trace.size(); ++k) {
    iter_col.push_back(static_cast<double>(k + 1));
    primal_col.push_back(result.state.trace[k].primal_residual);
    dual_col.push_back(result.state.trace[k].dual_residual);
    gap_col.push_back(result.state.trace[k].disagreement);
  }
  write_csv_columns(ctx.out_dir / "residuals.csv",
                    {"iteration", "primal_residual", "dual_residual",
                     "disagreement"},
                    {iter_col, primal_col, dual_col, gap_col});

  nlohmann::json out;
  out["converged"] = result.converged;
  out["iterations"] = result.iterations;
  out["mode"] = mode;
  out["topology_connected"] = topology.connected();
  out["disagreement"] = result.disagreement;
  out["solution"] = std::vector<double>(
      result.solution.data(), result.solution.data() + result.solution.size());
  if (admm.mode == AdmmMode::kNeighbor) {
    nlohmann::json locals = nlohmann::json::array();
    for (const auto& z : result.state.local_z) {
      locals.push_back(std::vector<double>(z.data(), z.data() + z.size()));
    }
    out["local_z"] = locals;
  }
  write_text(ctx.out_dir / "solution.json", out.dump(2) + "\n");
  ctx.log("admm: " + std::string(result.converged ? "converged" : "stopped") +
          " after " + std::to_string(result.iterations) + " iterations");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(ctx, "admm", ctx.config, wall);
}

}  // namespace crowdsense::cli
