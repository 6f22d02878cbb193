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
// crowdsense — crowd-sensed data analytics toolkit.
// Exit codes: 0 success, 1 invalid config, 2 numerical failure, 3 I/O failure.

#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "crowdsense/error.hpp"

namespace {

using crowdsense::cli::AdmmOverrides;
using crowdsense::cli::RunContext;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowd-sensed data analytics toolkit"};
  app.require_subcommand(1);

  struct Registered {
    CLI::App* cmd;
    std::shared_ptr<CommonArgs> args;
    std::function<void(RunContext&)> body;
  };
  std::vector<Registered> registered;

  const auto add = [&](const std::string& name, const std::string& help,
                       std::function<void(RunContext&)> body) -> CLI::App* {
    auto* cmd = app.add_subcommand(name, help);
    auto args = std::make_shared<CommonArgs>();
    cmd->add_option("--config", args->config_path, "configuration file (JSON)")
        ->required();
    cmd->add_option("--out", args->out_dir, "output directory")->required();
    cmd->add_option("--seed", args->seed, "64-bit run seed");
    cmd->add_flag("--quiet", args->quiet, "suppress progress output");
    registered.push_back({cmd, std::move(args), std::move(body)});
    return cmd;
  };

  add("fuse", "joint distributions over heterogeneous sensor samples",
      crowdsense::cli::run_fuse);
  add("kernel", "Gram matrices and kernel ridge regression",
      crowdsense::cli::run_kernel);
  add("rpca", "low-rank + sparse recovery of a data matrix",
      crowdsense::cli::run_rpca);
  auto admm_overrides = std::make_shared<AdmmOverrides>();
  CLI::App* admm_cmd =
      add("admm", "consensus optimization over an agent topology",
          [admm_overrides](RunContext& ctx) {
            crowdsense::cli::run_admm(ctx, *admm_overrides);
          });
  admm_cmd->add_option("--mode", admm_overrides->mode,
                       "central|neighbor (overrides config)");
  admm_cmd->add_option("--mu", admm_overrides->mu,
                       "penalty parameter (overrides config)");
  admm_cmd->add_option("--iters", admm_overrides->max_iters,
                       "iteration cap (overrides config)");
  add("game", "spatial games and learning-automata simulation",
      crowdsense::cli::run_game);
  add("metrics", "quality-of-data/information/experience scores",
      crowdsense::cli::run_metrics);
  add("scenario", "end-to-end smart-traffic pipeline",
      crowdsense::cli::run_scenario);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (auto& reg : registered) {
    if (!reg.cmd->parsed()) continue;
    try {
      RunContext ctx = crowdsense::cli::make_context(
          reg.args->config_path, reg.args->out_dir, reg.args->seed,
          reg.cmd->count("--seed") > 0, reg.args->quiet, reg.cmd->get_name());
      reg.body(ctx);
      return 0;
    } catch (const crowdsense::IoError& e) {
      std::fprintf(stderr, "I/O failure: %s\n", e.what());
      return 3;
    } catch (const crowdsense::NumericalError& e) {
      std::fprintf(stderr, "numerical failure in %s: %s\n",
                   reg.cmd->get_name().c_str(), e.what());
      return 2;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "invalid config: %s\n", e.what());
      return 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }
  return 1;
}
