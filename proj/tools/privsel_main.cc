// Copyright 2026 The privsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// privsel: batch experiments for the private selection library.
// Exit status: 0 on success, 1 when an acceptance threshold is missed,
// 2 on a usage or parameter error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "cli_config.h"
#include "commands.h"

namespace {

constexpr int kThresholdMissed = 1;
constexpr int kUsageError = 2;

}  // namespace

int main(int argc, char** argv) {
  using privsel::cli::ExperimentConfig;
  CLI::App app(
      "Private selection experiments; output is CSV with a JSON "
      "metadata header.");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  std::uint64_t seed = 1;
  std::int64_t trials = 0;
  bool pure_dp = false;
  app.add_option("--config", config_path, "JSON parameter file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "root seed")->capture_default_str();
  CLI::Option* trials_option = app.add_option(
      "--trials", trials, "trial count (command default if unset)");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_flag("--pure-dp", pure_dp, "pure-DP parameters for the SVT");
  for (const std::string& name : privsel::cli::SubcommandNames()) {
    app.add_subcommand(name);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  ExperimentConfig config;
  config.subcommand = app.get_subcommands().front()->get_name();
  config.seed = seed;
  if (trials_option->count() > 0) config.trials = trials;
  config.out = out_path;
  config.pure_dp = pure_dp;
  if (!config_path.empty()) {
    absl::StatusOr<privsel::cli::Json> params =
        privsel::cli::LoadConfigFile(config_path);
    if (!params.ok()) {
      std::cerr << "privsel: " << params.status().message() << "\n";
      return kUsageError;
    }
    config.params = *std::move(params);
  }

  absl::StatusOr<privsel::cli::CommandResult> result =
      privsel::cli::Dispatch(config);
  if (!result.ok()) {
    std::cerr << "privsel " << config.subcommand << ": "
              << result.status().message() << "\n";
    return kUsageError;
  }
  if (out_path.empty()) {
    std::cout << result->csv;
    std::cout.flush();
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << result->csv;
    if (!out) {
      std::cerr << "privsel: cannot write " << out_path << "\n";
      return kUsageError;
    }
  }
  std::cerr << result->summary << (result->passed ? "" : " [FAILED]") << "\n";
  return result->passed ? 0 : kThresholdMissed;
}
