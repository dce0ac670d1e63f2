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

// The privsel subcommands. Each one is a pure function of its config: the
// same config and seed give the same bytes.

#ifndef PRIVSEL_TOOLS_COMMANDS_H_
#define PRIVSEL_TOOLS_COMMANDS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "cli_config.h"
#include "privsel/coin_game.h"
#include "privsel/random_stream.h"

namespace privsel::cli {

absl::StatusOr<CommandResult> RunCoinVerify(const ExperimentConfig& config);
absl::StatusOr<CommandResult> RunAccountant(const ExperimentConfig& config);
absl::StatusOr<CommandResult> RunSelectDemo(const ExperimentConfig& config);
absl::StatusOr<CommandResult> RunTopKBench(const ExperimentConfig& config);
absl::StatusOr<CommandResult> RunSvtBench(const ExperimentConfig& config);
absl::StatusOr<CommandResult> RunMwuBench(const ExperimentConfig& config);

// Runs config.subcommand.
absl::StatusOr<CommandResult> Dispatch(const ExperimentConfig& config);
const std::vector<std::string>& SubcommandNames();

struct ParsedSchedule {
  std::vector<QueryPair> pairs;
  std::vector<int> lines;  // source line of each pair, 1-based
};

// Schedule files: one "p, q" pair per line, blank lines separate schedules,
// '#' starts a comment. Errors name the offending line.
absl::StatusOr<std::vector<ParsedSchedule>> ParseSchedules(
    absl::string_view text);

// Numbers from a CSV column: one value per line in the first field, with an
// optional non-numeric header line.
absl::StatusOr<std::vector<double>> ParseScoreColumn(absl::string_view text);

// One run of the classical sparse vector baseline: for each of up to c
// above-threshold answers, a fresh threshold noise Lap(2 c s / eps) and
// per-query noise Lap(4 c s / eps). Returns TOP/BOT per answered query
// (true for TOP) and stops after the c-th TOP.
std::vector<bool> ClassicalSvt(const std::vector<double>& values,
                               double threshold, int c, double epsilon,
                               double sensitivity, RandomStream& stream);

}  // namespace privsel::cli

#endif  // PRIVSEL_TOOLS_COMMANDS_H_
