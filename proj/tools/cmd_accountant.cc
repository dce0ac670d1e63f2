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

// accountant: pure and approximate framework cost over a parameter grid.

#include <cmath>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "commands.h"
#include "privsel/ledger.h"

namespace privsel::cli {
namespace {

absl::StatusOr<std::vector<std::int64_t>> Counts(const Params& params,
                                                 const char* name) {
  std::vector<std::int64_t> out;
  for (double v : params.Reals(name)) {
    if (!(v >= 0) || v != std::floor(v) || v > 1e9) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " entries must be nonnegative integers, got ", v));
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

}  // namespace

absl::StatusOr<CommandResult> RunAccountant(const ExperimentConfig& config) {
  absl::StatusOr<Params> params = Params::Create(
      config.params,
      {{"c1", ParamType::kRealList, {1}},
       {"c2", ParamType::kRealList, {0, 1, 10, 100, 1000, 10000}},
       {"gamma", ParamType::kRealList, {1}},
       {"epsilon", ParamType::kRealList, {0.1}},
       {"delta", ParamType::kRealList, {1e-6}}});
  if (!params.ok()) return params.status();
  absl::StatusOr<std::vector<std::int64_t>> c1s = Counts(*params, "c1");
  if (!c1s.ok()) return c1s.status();
  absl::StatusOr<std::vector<std::int64_t>> c2s = Counts(*params, "c2");
  if (!c2s.ok()) return c2s.status();
  for (double gamma : params->Reals("gamma")) {
    if (!(gamma > 0) || !std::isfinite(gamma)) {
      return absl::InvalidArgumentError(
          absl::StrCat("gamma must be positive and finite, got ", gamma));
    }
  }
  for (double epsilon : params->Reals("epsilon")) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon must be positive, got ", epsilon));
    }
  }

  CsvTable table(Metadata(config, *params, 1),
                 {"c1", "c2", "gamma", "epsilon", "delta", "pure_epsilon",
                  "approx_epsilon", "approx_delta", "approx_below_pure"});
  for (std::int64_t c1 : *c1s) {
    for (std::int64_t c2 : *c2s) {
      for (double gamma : params->Reals("gamma")) {
        for (double epsilon : params->Reals("epsilon")) {
          PrivacyLedger ledger(epsilon);
          for (std::int64_t i = 0; i < c1; ++i) ledger.ChargeSelection(0);
          for (std::int64_t i = 0; i < c2; ++i) ledger.ChargeTop();
          const PrivacyCost pure = PureDpCost(ledger, gamma);
          for (double delta : params->Reals("delta")) {
            absl::StatusOr<PrivacyCost> approx =
                ApproxDpCost(ledger, gamma, delta);
            if (!approx.ok()) return approx.status();
            table.AddRow({Cell(c1), Cell(c2), Cell(gamma), Cell(epsilon),
                          Cell(delta), Cell(pure.epsilon),
                          Cell(approx->epsilon), Cell(approx->delta),
                          Cell(approx->epsilon < pure.epsilon)});
          }
        }
      }
    }
  }
  return CommandResult{table.Render(), true,
                       absl::StrFormat("accountant: %d rows", table.rows())};
}

}  // namespace privsel::cli
