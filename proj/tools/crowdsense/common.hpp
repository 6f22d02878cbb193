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

#ifndef CROWDSENSE_TOOLS_COMMON_HPP_
#define CROWDSENSE_TOOLS_COMMON_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace crowdsense::cli {

inline constexpr const char* kVersion = "0.1.0";

// Everything a subcommand needs: the validated config object, the output
// directory, the seed, and quiet mode.
struct RunContext {
  nlohmann::json config;
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool quiet = false;

  void log(const std::string& line) const;
  // Resolves a path from the config relative to the config file location.
  std::filesystem::path resolve(const std::string& path) const;
};

// Loads the config JSON. A run.json manifest is accepted transparently: its
// resolved `config` block (and `seed`, unless overridden) is used, which
// makes every run reproducible from its own manifest.
RunContext make_context(const std::string& config_path,
                        const std::string& out_dir, std::uint64_t seed,
                        bool seed_given, bool quiet,
                        const std::string& subcommand);

// Rejects keys outside `allowed`; unknown keys are errors, not warnings.
void check_keys(const nlohmann::json& object,
                const std::vector<std::string>& allowed,
                const std::string& where);

// Field accessors that name the offending field on error.
double get_number(const nlohmann::json& object, const std::string& key,
                  double fallback);
double require_number(const nlohmann::json& object, const std::string& key,
                      const std::string& where);
int get_int(const nlohmann::json& object, const std::string& key, int fallback);
std::string get_string(const nlohmann::json& object, const std::string& key,
                       const std::string& fallback);
std::string require_string(const nlohmann::json& object, const std::string& key,
                           const std::string& where);

void write_text(const std::filesystem::path& path, const std::string& body);

// run.json: subcommand, resolved config, seed, version, wall clock.
void write_manifest(const RunContext& ctx, const std::string& subcommand,
                    const nlohmann::json& resolved_config,
                    double wall_clock_seconds);

}  // namespace crowdsense::cli

#endif  // CROWDSENSE_TOOLS_COMMON_HPP_
