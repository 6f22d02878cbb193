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

#ifndef CROWDSENSE_TOOLS_COMMANDS_HPP_
#define CROWDSENSE_TOOLS_COMMANDS_HPP_

#include "common.hpp"

namespace crowdsense::cli {

// Per-subcommand overrides supplied as flags.
struct AdmmOverrides {
  std::string mode;  // empty: take from config
  double mu = 0.0;   // <= 0: take from config
  int max_iters = 0;
};

void run_fuse(RunContext& ctx);
void run_kernel(RunContext& ctx);
void run_rpca(RunContext& ctx);
void run_admm(RunContext& ctx, const AdmmOverrides& overrides);
void run_game(RunContext& ctx);
void run_metrics(RunContext& ctx);
void run_scenario(RunContext& ctx);

}  // namespace crowdsense::cli

#endif  // CROWDSENSE_TOOLS_COMMANDS_HPP_
