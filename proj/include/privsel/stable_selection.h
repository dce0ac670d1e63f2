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

// Selection of a high-scoring function through Selection over one noisy
// mechanism per function: the choosing mechanism for families with small
// total sensitivity, and stable selection for families with a large gap
// between the best and the (k+1)-th score.

#ifndef PRIVSEL_STABLE_SELECTION_H_
#define PRIVSEL_STABLE_SELECTION_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/better_than_median.h"
#include "privsel/framework.h"
#include "privsel/noise.h"
#include "privsel/random_stream.h"

namespace privsel {

struct FunctionChoice {
  std::optional<std::size_t> index;  // nullopt when no run fired
  double noisy_score = 0;
  PrivacyCost cost;  // framework cost after the call
};

// Selection parameters shared by both mechanisms.
struct ChoiceParams {
  double epsilon = 0.5;
  double delta = 1e-6;
  double beta = 0.05;
};

// ceil(4 / beta) and ceil(2 / beta).
std::int64_t ChoosingRepetitions(double beta);
std::int64_t StableRepetitions(double beta);

// The (k+1)-th largest value; requires k < scores.size().
absl::StatusOr<double> KthGapReference(std::span<const double> scores, int k);

namespace internal {

absl::Status ValidateChoiceParams(const ChoiceParams& params);

template <typename Dataset>
FunctionChoice Finish(
    const absl::StatusOr<std::optional<ScoredCandidate<std::size_t>>>& chosen,
    const Framework<Dataset>& framework) {
  FunctionChoice choice;
  if (chosen->has_value()) {
    choice.index = (*chosen)->payload;
    choice.noisy_score = (*chosen)->score;
  }
  choice.cost = framework.PureCost();
  return choice;
}

}  // namespace internal

// Choosing mechanism. The family must declare its total sensitivity k.
// Mechanism i outputs (i, f_i(D) + TLap(eps, delta beta / 5k)) and
// Selection runs each ceil(4 / beta) times on a gamma = 1 framework. One call
// costs (3 eps, delta). With probability 1 - beta the chosen f is within the
// TLap radius ln(5k / (delta beta)) / eps of the best.
template <typename Dataset>
absl::StatusOr<FunctionChoice> ChoosingMechanism(
    const ScoreFamily<Dataset>& family, const ChoiceParams& params,
    Framework<Dataset>& framework) {
  if (absl::Status s = internal::ValidateChoiceParams(params); !s.ok())
    return s;
  if (!family.total_sensitivity.has_value()) {
    return absl::FailedPreconditionError(
        "choosing mechanism needs a declared total sensitivity");
  }
  if (family.evaluators.empty()) {
    return absl::InvalidArgumentError("empty score family");
  }
  if (framework.gamma() != 1) {
    return absl::FailedPreconditionError("choosing mechanism needs gamma = 1");
  }
  const double k = std::max(1.0, *family.total_sensitivity);
  absl::StatusOr<TruncatedLaplaceParams> noise = TruncatedLaplaceParams::Create(
      params.epsilon, params.delta * params.beta / (5 * k));
  if (!noise.ok()) return noise.status();
  const std::int64_t tau = ChoosingRepetitions(params.beta);

  std::vector<Mechanism<Dataset, ScoredCandidate<std::size_t>>> mechanisms;
  for (std::size_t i = 0; i < family.evaluators.size(); ++i) {
    mechanisms.push_back({[i, f = family.evaluators[i], tlap = *noise](
                              const Dataset& d, RandomStream& s) {
                            return ScoredCandidate<std::size_t>{
                                i, f(d) + SampleTruncatedLaplace(s, tlap)};
                          },
                          params.epsilon, noise->delta()});
  }
  // Mechanism i is (eps, delta beta / 5k |f_i(D) - f_i(D')|)-DP, so the
  // total delta mass is tau * delta beta / 5 rather than tau * m * delta_i.
  SelectOptions options;
  options.delta_mass = tau * params.delta * params.beta / 5;
  auto chosen = framework.Select(tau, mechanisms, options);
  if (!chosen.ok()) return chosen.status();
  return internal::Finish(chosen, framework);
}

// Stable selection. Scores are shifted against Q(D), the (k+1)-th largest,
// and clipped at 0: s_i = max(f_i(D) - Q(D), 0) + TLap(eps / 3, beta delta /
// 10k). Selection runs each mechanism ceil(2 / beta) times on a gamma = 1
// framework.
template <typename Dataset>
absl::StatusOr<FunctionChoice> StableSelect(const ScoreFamily<Dataset>& family,
                                            int k, const ChoiceParams& params,
                                            Framework<Dataset>& framework) {
  if (absl::Status s = internal::ValidateChoiceParams(params); !s.ok())
    return s;
  const std::size_t m = family.evaluators.size();
  if (k < 1 || static_cast<std::size_t>(k) >= m) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 1 <= k < m, got k = ", k, ", m = ", m));
  }
  if (framework.gamma() != 1) {
    return absl::FailedPreconditionError("stable selection needs gamma = 1");
  }
  const double epsilon_each = params.epsilon / 3;
  absl::StatusOr<TruncatedLaplaceParams> noise = TruncatedLaplaceParams::Create(
      epsilon_each, params.beta * params.delta / (10.0 * k));
  if (!noise.ok()) return noise.status();
  const std::int64_t tau = StableRepetitions(params.beta);

  std::vector<Mechanism<Dataset, ScoredCandidate<std::size_t>>> mechanisms;
  for (std::size_t i = 0; i < m; ++i) {
    mechanisms.push_back(
        {[i, k, &family, tlap = *noise](const Dataset& d, RandomStream& s) {
           std::vector<double> scores;
           scores.reserve(family.evaluators.size());
           for (const auto& f : family.evaluators) scores.push_back(f(d));
           const double q = *KthGapReference(scores, k);
           const double shifted = std::max(scores[i] - q, 0.0);
           return ScoredCandidate<std::size_t>{
               i, shifted + SampleTruncatedLaplace(s, tlap)};
         },
         epsilon_each, 2 * noise->delta()});
  }
  // At most 2k mechanisms see a shifted score move, each with delta mass
  // 2 beta delta / 10k.
  SelectOptions options;
  options.delta_mass = tau * 2 * params.delta * params.beta / 5;
  auto chosen = framework.Select(tau, mechanisms, options);
  if (!chosen.ok()) return chosen.status();
  return internal::Finish(chosen, framework);
}

}  // namespace privsel

#endif  // PRIVSEL_STABLE_SELECTION_H_
