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

#include "commands.h"

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace privsel::cli {

const std::vector<std::string>& SubcommandNames() {
  static const auto* names =
      new std::vector<std::string>{"coin-verify", "accountant", "select-demo",
                                   "topk-bench",  "svt-bench",  "mwu-bench"};
  return *names;
}

absl::StatusOr<CommandResult> Dispatch(const ExperimentConfig& config) {
  if (config.trials.has_value() && *config.trials < 1) {
    return absl::InvalidArgumentError("--trials must be at least 1");
  }
  const std::string& name = config.subcommand;
  if (name == "coin-verify") return RunCoinVerify(config);
  if (name == "accountant") return RunAccountant(config);
  if (name == "select-demo") return RunSelectDemo(config);
  if (name == "topk-bench") return RunTopKBench(config);
  if (name == "svt-bench") return RunSvtBench(config);
  if (name == "mwu-bench") return RunMwuBench(config);
  return absl::InvalidArgumentError(
      absl::StrCat("unknown subcommand '", name, "'"));
}

}  // namespace privsel::cli
