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

#ifndef PRIVSEL_LEDGER_H_
#define PRIVSEL_LEDGER_H_

#include <cstdint>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privsel {

// Running privacy account of one framework instance. All mechanisms and
// hypotheses fed to one instance must share a single epsilon; the first one
// seen fixes it unless it was given up front.
class PrivacyLedger {
 public:
  explicit PrivacyLedger(std::optional<double> base_epsilon = std::nullopt)
      : base_epsilon_(base_epsilon) {}

  // Fixes the base epsilon on first use, then rejects any other value.
  absl::Status Admit(double epsilon);

  void ChargeSelection(double delta_mass);
  void ChargeTop() { ++top_responses_; }
  // A released epsilon-DP statistic, charged 2 epsilon like a TOP answer.
  void ChargeRelease(double delta) {
    ++releases_;
    delta_mass_ += delta;
  }
  void AccrueDelta(double delta) { delta_mass_ += delta; }

  std::optional<double> base_epsilon() const { return base_epsilon_; }
  std::int64_t selection_calls() const { return selection_calls_; }
  std::int64_t top_responses() const { return top_responses_; }
  std::int64_t releases() const { return releases_; }
  double delta_mass() const { return delta_mass_; }

 private:
  std::optional<double> base_epsilon_;
  std::int64_t selection_calls_ = 0;
  std::int64_t top_responses_ = 0;
  std::int64_t releases_ = 0;
  double delta_mass_ = 0;
};

struct PrivacyCost {
  double epsilon = 0;
  double delta = 0;
};

// (2 c1 + 2 c2 + 2 releases + gamma) * epsilon, paired with the delta mass.
PrivacyCost PureDpCost(const PrivacyLedger& ledger, double gamma);

// Approximate-DP cost at the given target delta. The TOP responses (and
// releases) are composed through the Renyi bound of the coin game at
// parameter 2 epsilon, converted at the optimal order:
//   gamma eps + 2 c1 eps + 12 c eps^2 + 4 sqrt(3 c ln(1 / delta)) eps.
// With no TOP responses this returns the pure cost unchanged. Otherwise the
// reported delta is delta_target plus the accumulated delta mass.
absl::StatusOr<PrivacyCost> ApproxDpCost(const PrivacyLedger& ledger,
                                         double gamma, double delta_target);

// The Renyi order at which the approximate cost is attained.
double OptimalRenyiOrder(std::int64_t charged, double epsilon,
                         double delta_target);

}  // namespace privsel

#endif  // PRIVSEL_LEDGER_H_
