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
#include <cmath>
#include <vector>

#include "commands.hpp"
#include "crowdsense/copula.hpp"
#include "crowdsense/io.hpp"

namespace crowdsense::cli {

namespace {

// A marginal spec is either parametric or fitted from its input column.
MarginalModel parse_marginal(const nlohmann::json& spec,
                             const Eigen::MatrixXd& samples, int column) {
  check_keys(spec, {"kind", "mean", "std", "rate"}, "marginal");
  const std::string kind = require_string(spec, "kind", "marginal");
  if (kind == "gaussian") {
    return MarginalModel::gaussian(require_number(spec, "mean", "marginal"),
                                   require_number(spec, "std", "marginal"));
  }
  if (kind == "exponential") {
    return MarginalModel::exponential(require_number(spec, "rate", "marginal"));
  }
  if (kind == "empirical") {
    std::vector<double> column_data(samples.rows());
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
      column_data[static_cast<std::size_t>(r)] = samples(r, column);
    }
    return MarginalModel::empirical(std::move(column_data));
  }
  throw std::invalid_argument("marginal kind must be gaussian, exponential "
                              "or empirical, got: " + kind);
}

CopulaModel parse_copula(const nlohmann::json& spec, int dimension) {
  check_keys(spec, {"kind", "correlation"}, "copula");
  const std::string kind = require_string(spec, "kind", "copula");
  if (kind == "independence") {
    return CopulaModel::independence(dimension);
  }
  if (kind == "gaussian") {
    if (!spec.contains("correlation") || !spec["correlation"].is_array()) {
      throw std::invalid_argument(
          "gaussian copula requires field correlation (matrix)");
    }
    const auto& rows = spec["correlation"];
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd corr(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!rows[i].is_array() ||
          static_cast<Eigen::Index>(rows[i].size()) != n) {
        throw std::invalid_argument("field correlation must be square");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        corr(i, j) = rows[i][j].get<double>();
      }
    }
    if (n != dimension) {
      throw std::invalid_argument(
          "field correlation does not match the marginal count");
    }
    return CopulaModel::gaussian(std::move(corr));
  }
  throw std::invalid_argument("copula kind must be independence or gaussian, "
                              "got: " + kind);
}

Hypothesis parse_hypothesis(const nlohmann::json& spec,
                            const Eigen::MatrixXd& samples) {
  check_keys(spec, {"copula", "marginals"}, "hypothesis");
  if (!spec.contains("marginals") || !spec["marginals"].is_array() ||
      spec["marginals"].empty()) {
    throw std::invalid_argument("hypothesis requires field marginals (array)");
  }
  const auto& list = spec["marginals"];
  if (static_cast<Eigen::Index>(list.size()) != samples.cols()) {
    throw std::invalid_argument(
        "field marginals must have one entry per input column");
  }
  Hypothesis h{CopulaModel::independence(static_cast<int>(list.size())), {}};
  for (int i = 0; i < static_cast<int>(list.size()); ++i) {
    h.marginals.push_back(parse_marginal(list[i], samples, i));
  }
  if (spec.contains("copula")) {
    h.copula = parse_copula(spec["copula"], static_cast<int>(list.size()));
  }
  return h;
}

}  // namespace

void run_fuse(RunContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  check_keys(ctx.config, {"input", "copula", "marginals", "alternative"},
             "fuse config");
  const std::string input = require_string(ctx.config, "input", "fuse config");
  const Eigen::MatrixXd samples = read_csv_matrix(ctx.resolve(input));

  nlohmann::json base_spec;
  base_spec["marginals"] = ctx.config.contains("marginals")
                               ? ctx.config["marginals"]
                               : nlohmann::json::array();
  if (ctx.config.contains("copula")) base_spec["copula"] = ctx.config["copula"];
  const Hypothesis base = parse_hypothesis(base_spec, samples);

  const bool with_ratio = ctx.config.contains("alternative");
  Hypothesis alternative = base;
  if (with_ratio) {
    alternative = parse_hypothesis(ctx.config["alternative"], samples);
  }

  std::vector<double> pdf_col, log_pdf_col, cdf_col, llr_col;
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    const HeterogeneousSample z = samples.row(r).transpose();
    log_pdf_col.push_back(log_joint_pdf(base.copula, base.marginals, z));
    pdf_col.push_back(std::exp(log_pdf_col.back()));
    cdf_col.push_back(joint_cdf(base.copula, base.marginals, z));
    if (with_ratio) {
      llr_col.push_back(log_likelihood_ratio(base, alternative, z));
    }
  }

  std::vector<std::string> headers = {"joint_pdf", "log_joint_pdf", "joint_cdf"};
  std::vector<std::vector<double>> columns = {pdf_col, log_pdf_col, cdf_col};
  if (with_ratio) {
    headers.push_back("log_likelihood_ratio");
    columns.push_back(llr_col);
  }
  write_csv_columns(ctx.out_dir / "fusion.csv", headers, columns);
  ctx.log("fuse: wrote fusion.csv (" + std::to_string(samples.rows()) +
          " rows)");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(ctx, "fuse", ctx.config, wall);
}

}  // namespace crowdsense::cli
