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

// Better-than-median amplification: run a scored base mechanism a random
// number of times and keep the best score. With probability 1 - beta the
// kept score is at least the median score of a single run.

#ifndef PRIVSEL_BETTER_THAN_MEDIAN_H_
#define PRIVSEL_BETTER_THAN_MEDIAN_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/framework.h"

namespace privsel {

// A solution with a real score. Higher scores are better.
template <typename Payload>
struct ScoredCandidate {
  Payload payload;
  double score = 0;

  friend bool operator<(const ScoredCandidate& a, const ScoredCandidate& b) {
    return a.score < b.score;
  }
};

// Sensitivity-1 score functions f_1..f_m over a dataset.
template <typename Dataset>
struct ScoreFamily {
  std::vector<std::function<double(const Dataset&)>> evaluators;
  // Declared bound on sum_i |f_i(D) - f_i(D')| over neighbors, if known.
  std::optional<double> total_sensitivity;
};

class BtmConfig {
 public:
  // alpha > 0 trades privacy (the framework runs at gamma = alpha) for
  // fewer oracle calls; beta in (0, 1) is the failure probability.
  static absl::StatusOr<BtmConfig> Create(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  // T = ceil(2 / beta) when alpha = 1, else
  // ceil(5 (2 / beta)^(1 / alpha) ln(1 / beta)).
  std::int64_t oracle_calls() const { return oracle_calls_; }

 private:
  BtmConfig(double alpha, double beta, std::int64_t oracle_calls)
      : alpha_(alpha), beta_(beta), oracle_calls_(oracle_calls) {}

  double alpha_;
  double beta_;
  std::int64_t oracle_calls_;
};

// Selects the best of Binomial(T, p) runs of `base` on the framework, which
// must have been created with gamma = config.alpha(). Costs
// ((2 + alpha) eps, T delta) on a fresh framework. Returns nullopt when no
// run fired.
template <typename Dataset, typename Payload>
absl::StatusOr<std::optional<ScoredCandidate<Payload>>> BetterThanMedian(
    const Mechanism<Dataset, ScoredCandidate<Payload>>& base,
    const BtmConfig& config, Framework<Dataset>& framework,
    const SelectOptions& options = {}) {
  if (framework.gamma() != config.alpha()) {
    return absl::FailedPreconditionError(
        absl::StrCat("framework gamma ", framework.gamma(),
                     " differs from the configured alpha ", config.alpha()));
  }
  if (!(base.epsilon >= 0 && base.epsilon < 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "base mechanism epsilon must lie in [0, 1), got ", base.epsilon));
  }
  return framework.Select(
      config.oracle_calls(),
      std::vector<Mechanism<Dataset, ScoredCandidate<Payload>>>{base}, options);
}

}  // namespace privsel

#endif  // PRIVSEL_BETTER_THAN_MEDIAN_H_
