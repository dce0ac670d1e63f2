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

// Private top-k selection. A base mechanism peels k candidates with the
// exponential mechanism and attaches a noisy upper bound q~ on the
// suboptimality gap; better-than-median keeps the run with the smallest q~.

#ifndef PRIVSEL_TOP_K_H_
#define PRIVSEL_TOP_K_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/better_than_median.h"
#include "privsel/framework.h"
#include "privsel/noise.h"
#include "privsel/random_stream.h"

namespace privsel {

// Calibrated constant C of the gap bound
// C sqrt(k ln(1/delta)) ln(m) / eps + C ln(1/beta) / eps.
inline constexpr double kTopKGapConstant = 30.0;

// max over i not in S of scores[i] minus min over j in S of scores[j].
// Requires 0 < |S| < m and distinct in-range indices.
absl::StatusOr<double> Gap(std::span<const std::size_t> selected,
                           std::span<const double> scores);

// The right-hand side of the gap bound above.
double TopKGapBound(double constant, int k, std::size_t m, double epsilon,
                    double delta, double beta);

// Repeated exponential mechanism without replacement. Weights are computed
// once, so many samples from the same scores are cheap.
class PeelingSampler {
 public:
  PeelingSampler(std::span<const double> scores, double epsilon,
                 double sensitivity);

  std::vector<std::size_t> Sample(RandomStream& stream, int k) const;

 private:
  std::vector<double> log_weights_;
  std::vector<double> weights_;
};

struct TopKParams {
  int k = 1;
  double epsilon = 0.5;
  double delta = 1e-6;
  double beta = 1e-3;
  double gap_constant = kTopKGapConstant;
};

struct TopKResult {
  std::vector<std::size_t> selected;  // sorted indices, |selected| = k
  double certificate = 0;             // noisy gap bound q~ of the chosen run
  // The run chosen privately failed the gap bound and was replaced by the
  // exact top k (only when beta < delta).
  bool corrected = false;
  // No run fired; a data-independent set was returned.
  bool empty = false;
  PrivacyCost cost;
  double internal_delta = 0;  // delta the private part ran at
  double internal_beta = 0;
};

namespace internal {

// Runs the private part at (epsilon, delta, beta) with beta >= delta.
template <typename Dataset>
absl::StatusOr<TopKResult> PrivateTopK(std::span<const double> scores, int k,
                                       double epsilon, double delta,
                                       double beta, const Dataset& dataset,
                                       RandomStream stream) {
  const std::size_t m = scores.size();
  const double epsilon_em = epsilon / (40 * std::sqrt(k * std::log(1 / delta)));
  const double offset = 13 * std::log(1 / beta) / epsilon;
  const PeelingSampler sampler(scores, epsilon_em, 1.0);
  const std::vector<double> score_copy(scores.begin(), scores.end());

  using Candidate = ScoredCandidate<std::vector<std::size_t>>;
  Mechanism<Dataset, Candidate> base;
  base.epsilon = epsilon / 3;
  base.delta = delta * delta / 10;
  base.run = [&sampler, &score_copy, k, epsilon, offset](const Dataset&,
                                                         RandomStream& s) {
    std::vector<std::size_t> picked = sampler.Sample(s, k);
    const double gap = *Gap(picked, score_copy);
    const double noisy = gap + *SampleLaplace(s, 6 / epsilon) + offset;
    return Candidate{std::move(picked), -noisy};
  };

  absl::StatusOr<BtmConfig> config = BtmConfig::Create(1, delta / 10);
  if (!config.ok()) return config.status();
  absl::StatusOr<Framework<Dataset>> framework =
      Framework<Dataset>::Create(1, dataset, std::move(stream));
  if (!framework.ok()) return framework.status();
  absl::StatusOr<std::optional<Candidate>> chosen =
      BetterThanMedian(base, *config, *framework);
  if (!chosen.ok()) return chosen.status();

  TopKResult result;
  result.internal_delta = delta;
  result.internal_beta = beta;
  if (chosen->has_value()) {
    result.selected = std::move((*chosen)->payload);
    result.certificate = -(*chosen)->score;
  } else {
    // Uniform k-subset drawn without looking at the data.
    std::vector<std::size_t> all(m);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < k; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(framework->stream().Uniform() * (m - i));
      std::swap(all[i], all[std::min(j, m - 1)]);
    }
    result.selected.assign(all.begin(), all.begin() + k);
    result.certificate = std::numeric_limits<double>::infinity();
    result.empty = true;
  }
  std::sort(result.selected.begin(), result.selected.end());
  result.cost = framework->PureCost();
  return result;
}

std::vector<std::size_t> ExactTopK(std::span<const double> scores, int k);

}  // namespace internal

// (eps, delta)-DP top-k selection. When beta < delta the private part runs
// at delta' = beta' = delta / 10 and a run whose true gap exceeds the bound
// at beta' is replaced by the exact top k, so the output then meets the
// bound with probability one.
template <typename Dataset>
absl::StatusOr<TopKResult> TopKSelect(const ScoreFamily<Dataset>& family,
                                      const TopKParams& params,
                                      const Dataset& dataset,
                                      RandomStream stream) {
  const std::size_t m = family.evaluators.size();
  // epsilon = 1 is admitted; the base mechanism then runs at 1/3.
  if (!(params.epsilon > 0 && params.epsilon <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must lie in (0, 1], got ", params.epsilon));
  }
  for (double x : {params.delta, params.beta}) {
    if (!(x > 0 && x < 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("delta and beta must lie in (0, 1), got ", x));
    }
  }
  if (params.k < 1 || static_cast<std::size_t>(params.k) >= m) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 1 <= k < m, got k = ", params.k, ", m = ", m));
  }
  // Scores are deterministic in the data, so one evaluation serves every run.
  std::vector<double> scores(m);
  for (std::size_t i = 0; i < m; ++i) scores[i] = family.evaluators[i](dataset);

  if (params.beta >= params.delta) {
    return internal::PrivateTopK(scores, params.k, params.epsilon, params.delta,
                                 params.beta, dataset, std::move(stream));
  }
  const double inner = params.delta / 10;
  absl::StatusOr<TopKResult> result =
      internal::PrivateTopK(scores, params.k, params.epsilon, inner, inner,
                            dataset, std::move(stream));
  if (!result.ok()) return result;
  const double bound = TopKGapBound(params.gap_constant, params.k, m,
                                    params.epsilon, params.delta, inner);
  if (result->empty || *Gap(result->selected, scores) > bound) {
    result->selected = internal::ExactTopK(scores, params.k);
    result->corrected = true;
  }
  // The correction fires with probability at most delta - delta / 10 when
  // the bound holds at beta'; that mass is added to the private part's.
  result->cost.delta += params.delta - inner;
  return result;
}

}  // namespace privsel

#endif  // PRIVSEL_TOP_K_H_
