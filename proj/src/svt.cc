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

#include "privsel/svt.h"

#include <cmath>
#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/noise.h"

namespace privsel {

absl::Status SvtConfig::Validate() const {
  if (!(epsilon_prime > 0) || !std::isfinite(epsilon_prime)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon' must be positive, got ", epsilon_prime));
  }
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must be positive, got ", gamma));
  }
  if (!(d > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("d must be positive, got ", d));
  }
  if (tau < 1 || k_prime < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tau and k' must be at least 1, got ", tau, " and ", k_prime));
  }
  if (!(sensitivity > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitivity must be positive, got ", sensitivity));
  }
  return absl::OkStatus();
}

double ApproxEpsilonPrime(double epsilon, double gamma, int k, double delta) {
  return epsilon / (gamma + std::sqrt(k * std::log(1 / delta)));
}

double PureEpsilonPrime(double epsilon, double gamma, int k) {
  return epsilon / (gamma + k);
}

absl::StatusOr<SvtConfig> SvtParams(double epsilon, double delta, int k,
                                    std::int64_t m, double beta,
                                    double sensitivity, bool pure_dp) {
  if (!(epsilon > 0 && epsilon <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must lie in (0, 1], got ", epsilon));
  }
  if (!pure_dp && !(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (m < 2) return absl::InvalidArgumentError("m must be at least 2");
  if (!(sensitivity > 0)) {
    return absl::InvalidArgumentError("sensitivity must be positive");
  }
  const double log_m = std::log(static_cast<double>(m));
  // beta > 2^-m, compared in logs so large m does not underflow.
  if (!(beta > 0 && beta * static_cast<double>(m) < 1 &&
        static_cast<double>(m) * std::log(2.0) > std::log(1 / beta))) {
    return absl::InvalidArgumentError(absl::StrCat(
        "beta must lie in (2^-m, 1/m) for m = ", m, ", got ", beta));
  }
  SvtConfig config;
  config.sensitivity = sensitivity;
  config.gamma = std::log(20 / beta) / log_m;
  config.tau = 5 * m * m;
  config.epsilon_prime =
      pure_dp ? PureEpsilonPrime(epsilon, config.gamma, k)
              : ApproxEpsilonPrime(epsilon, config.gamma, k, delta);
  config.k_prime =
      k + static_cast<std::int64_t>(std::ceil(7 * std::log(1 / beta) / log_m));
  config.d = 10 * sensitivity * log_m / config.epsilon_prime;
  return config;
}

Verdict TestAbove(double value, double t, double epsilon_prime,
                  double sensitivity, RandomStream& stream) {
  const double noisy =
      value + *SampleLaplace(stream, sensitivity / epsilon_prime);
  return noisy >= t ? Verdict::kTop : Verdict::kBot;
}

Verdict TestBelow(double value, double t, double d, double epsilon_prime,
                  double sensitivity, RandomStream& stream) {
  const double noisy =
      value + *SampleLaplace(stream, sensitivity / epsilon_prime);
  return noisy <= t - d ? Verdict::kTop : Verdict::kBot;
}

double AboveTopProbability(double value, double t, double epsilon_prime,
                           double sensitivity) {
  // Pr[Lap >= t - value], by symmetry the CDF at value - t.
  return LaplaceCdf(value - t, sensitivity / epsilon_prime);
}

double BelowTopProbability(double value, double t, double d,
                           double epsilon_prime, double sensitivity) {
  return LaplaceCdf(t - d - value, sensitivity / epsilon_prime);
}

}  // namespace privsel
