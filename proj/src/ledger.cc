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

#include "privsel/ledger.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace privsel {

absl::Status PrivacyLedger::Admit(double epsilon) {
  if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and nonnegative, got ", epsilon));
  }
  if (!base_epsilon_.has_value()) {
    base_epsilon_ = epsilon;
    return absl::OkStatus();
  }
  const double base = *base_epsilon_;
  const double tolerance = 1e-12 * std::max({1.0, std::abs(base), epsilon});
  if (std::abs(base - epsilon) > tolerance) {
    return absl::FailedPreconditionError(
        absl::StrCat("epsilon ", epsilon, " differs from the base epsilon ",
                     base, " of this framework"));
  }
  return absl::OkStatus();
}

void PrivacyLedger::ChargeSelection(double delta_mass) {
  ++selection_calls_;
  delta_mass_ += delta_mass;
}

PrivacyCost PureDpCost(const PrivacyLedger& ledger, double gamma) {
  const double epsilon = ledger.base_epsilon().value_or(0);
  const double units = 2.0 * ledger.selection_calls() +
                       2.0 * ledger.top_responses() + 2.0 * ledger.releases();
  return {(units + gamma) * epsilon, ledger.delta_mass()};
}

double OptimalRenyiOrder(std::int64_t charged, double epsilon,
                         double delta_target) {
  return 1 + std::sqrt(std::log(1 / delta_target) /
                       (12.0 * charged * epsilon * epsilon));
}

absl::StatusOr<PrivacyCost> ApproxDpCost(const PrivacyLedger& ledger,
                                         double gamma, double delta_target) {
  if (!(delta_target > 0 && delta_target < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta_target must lie in (0, 1), got ", delta_target));
  }
  const std::int64_t charged = ledger.top_responses() + ledger.releases();
  const double epsilon = ledger.base_epsilon().value_or(0);
  if (charged == 0 || epsilon == 0) return PureDpCost(ledger, gamma);
  const double c = static_cast<double>(charged);
  const double renyi_part =
      12 * c * epsilon * epsilon +
      4 * std::sqrt(3 * c * std::log(1 / delta_target)) * epsilon;
  const double selection_part = 2.0 * ledger.selection_calls() * epsilon;
  return PrivacyCost{gamma * epsilon + selection_part + renyi_part,
                     delta_target + ledger.delta_mass()};
}

}  // namespace privsel
