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

#include "common.hpp"

#include <cstdio>
#include <fstream>

#include "crowdsense/error.hpp"

namespace crowdsense::cli {

void RunContext::log(const std::string& line) const {
  if (!quiet) std::fprintf(stderr, "%s\n", line.c_str());
}

std::filesystem::path RunContext::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || config_path.empty()) return p;
  return config_path.parent_path() / p;
}

RunContext make_context(const std::string& config_path,
                        const std::string& out_dir, std::uint64_t seed,
                        bool seed_given, bool quiet,
                        const std::string& subcommand) {
  RunContext ctx;
  ctx.config_path = config_path;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  ctx.seed_given = seed_given;
  ctx.quiet = quiet;

  std::ifstream in(config_path);
  if (!in) {
    throw IoError("cannot open config file: " + config_path);
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config is not valid JSON (" +
                                std::string(e.what()) + "): " + config_path);
  }
  if (!parsed.is_object()) {
    throw std::invalid_argument("config root must be a JSON object: " +
                                config_path);
  }

  // Accept a previously written manifest as the config.
  if (parsed.contains("config") && parsed.contains("subcommand")) {
    if (parsed["subcommand"].get<std::string>() != subcommand) {
      throw std::invalid_argument(
          "manifest field subcommand does not match the invoked subcommand");
    }
    if (!seed_given && parsed.contains("seed")) {
      ctx.seed = parsed["seed"].get<std::uint64_t>();
      ctx.seed_given = true;
    }
    ctx.config = parsed["config"];
  } else {
    ctx.config = std::move(parsed);
  }

  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec || !std::filesystem::is_directory(ctx.out_dir)) {
    throw IoError("cannot create output directory: " + out_dir);
  }
  return ctx;
}

void check_keys(const nlohmann::json& object,
                const std::vector<std::string>& allowed,
                const std::string& where) {
  if (!object.is_object()) {
    throw std::invalid_argument(where + " must be a JSON object");
  }
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("unknown key in " + where + ": " + key);
    }
  }
}

double get_number(const nlohmann::json& object, const std::string& key,
                  double fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_number()) {
    throw std::invalid_argument("field " + key + " must be a number");
  }
  return object[key].get<double>();
}

double require_number(const nlohmann::json& object, const std::string& key,
                      const std::string& where) {
  if (!object.contains(key) || !object[key].is_number()) {
    throw std::invalid_argument(where + " requires numeric field " + key);
  }
  return object[key].get<double>();
}

int get_int(const nlohmann::json& object, const std::string& key, int fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_number_integer()) {
    throw std::invalid_argument("field " + key + " must be an integer");
  }
  return object[key].get<int>();
}

std::string get_string(const nlohmann::json& object, const std::string& key,
                       const std::string& fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_string()) {
    throw std::invalid_argument("field " + key + " must be a string");
  }
  return object[key].get<std::string>();
}

std::string require_string(const nlohmann::json& object, const std::string& key,
                           const std::string& where) {
  if (!object.contains(key) || !object[key].is_string()) {
    throw std::invalid_argument(where + " requires string field " + key);
  }
  return object[key].get<std::string>();
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write file: " + path.string());
  }
  out << body;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

void write_manifest(const RunContext& ctx, const std::string& subcommand,
                    const nlohmann::json& resolved_config,
                    double wall_clock_seconds) {
  nlohmann::json manifest;
  manifest["subcommand"] = subcommand;
  manifest["config"] = resolved_config;
  manifest["seed"] = ctx.seed;
  manifest["version"] = kVersion;
  manifest["wall_clock_seconds"] = wall_clock_seconds;
  write_text(ctx.out_dir / "run.json", manifest.dump(2) + "\n");
}

}  // namespace crowdsense::cli
