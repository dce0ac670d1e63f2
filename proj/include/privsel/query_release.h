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

// Confidence amplification for query release. A base algorithm that is
// accurate with probability 1/2 and reports a private upper bound s on its
// own error is run through better-than-median; the answers with the smallest
// s are kept, and the exact answers are substituted when even that s is too
// large.

#ifndef PRIVSEL_QUERY_RELEASE_H_
#define PRIVSEL_QUERY_RELEASE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/better_than_median.h"
#include "privsel/framework.h"
#include "privsel/noise.h"
#include "privsel/random_stream.h"

namespace privsel {

// Frozen constant C2 of the fallback threshold
// C2 (sqrt(k ln(1/delta)) + ln(1/delta)) / eps, calibrated so that the
// default baseline's median certificate sits below it for k <= 64.
inline constexpr double kQueryReleaseConstant = 100.0;

struct ReleaseCandidate {
  std::vector<double> answers;
  // Private upper bound on max_j |answers[j] - q_j(D)|.
  std::optional<double> certificate;
};

template <typename Dataset>
using QueryList = std::vector<std::function<double(const Dataset&)>>;

struct QueryReleaseParams {
  double epsilon = 0.5;
  double delta = 1e-6;
  double constant = kQueryReleaseConstant;
};

struct QueryReleaseResult {
  std::vector<double> answers;
  double certificate = 0;  // s of the kept run; +inf when no run fired
  bool fallback = false;   // exact answers were returned
  bool empty = false;
  PrivacyCost cost;
};

double QueryReleaseThreshold(double constant, std::size_t k, double epsilon,
                             double delta);

// Radius of TLap(eps / 2, delta / 2), the offset that makes
// s = err + offset + TLap(eps / 2, delta / 2) an upper bound on err.
double CertificateOffset(double epsilon, double delta);

// Stand-in base algorithm at (eps_b, delta_b): half the budget answers every
// query with TLap(eps1 / (2 sqrt(k ln(2 / delta1))), delta1 / 2k) noise,
// (eps1, delta1) = (eps_b / 2, delta_b / 2); the other half certifies the
// realized l-infinity error.
template <typename Dataset>
absl::StatusOr<Mechanism<Dataset, ReleaseCandidate>>
IndependentNoiseReleaseBase(const QueryList<Dataset>& queries, double epsilon_b,
                            double delta_b) {
  const std::size_t k = queries.size();
  if (k == 0) return absl::InvalidArgumentError("no queries");
  if (!(epsilon_b > 0) || !(delta_b > 0 && delta_b < 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bad base parameters eps = ", epsilon_b, ", delta = ", delta_b));
  }
  const double epsilon1 = epsilon_b / 2;
  const double delta1 = delta_b / 2;
  absl::StatusOr<TruncatedLaplaceParams> answer_noise =
      TruncatedLaplaceParams::Create(
          epsilon1 / (2 * std::sqrt(k * std::log(2 / delta1))),
          delta1 / (2.0 * k));
  if (!answer_noise.ok()) return answer_noise.status();
  absl::StatusOr<TruncatedLaplaceParams> certificate_noise =
      TruncatedLaplaceParams::Create(epsilon_b / 2, delta_b / 2);
  if (!certificate_noise.ok()) return certificate_noise.status();
  const double offset = CertificateOffset(epsilon_b, delta_b);

  Mechanism<Dataset, ReleaseCandidate> base;
  base.epsilon = epsilon_b;
  base.delta = delta_b;
  base.run = [queries, a = *answer_noise, c = *certificate_noise, offset](
                 const Dataset& d, RandomStream& s) {
    ReleaseCandidate out;
    double error = 0;
    for (const auto& q : queries) {
      const double truth = q(d);
      const double noisy = truth + SampleTruncatedLaplace(s, a);
      error = std::max(error, std::abs(noisy - truth));
      out.answers.push_back(noisy);
    }
    out.certificate = error + offset + SampleTruncatedLaplace(s, c);
    return out;
  };
  return base;
}

// Runs `base`, declared (eps / 3, delta^2 / 10)-DP, through better-than-median
// with gamma = 1 and beta = delta / 10, keeping the smallest certificate.
// The returned answers are always within the threshold of the truth.
template <typename Dataset>
absl::StatusOr<QueryReleaseResult> QueryReleaseAmplified(
    const Mechanism<Dataset, ReleaseCandidate>& base,
    const QueryList<Dataset>& queries, const QueryReleaseParams& params,
    const Dataset& dataset, RandomStream stream) {
  if (!(params.epsilon > 0 && params.epsilon < 1) ||
      !(params.delta > 0 && params.delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon and delta must lie in (0, 1), got ",
                     params.epsilon, ", ", params.delta));
  }
  if (queries.empty()) return absl::InvalidArgumentError("no queries");
  const double want_epsilon = params.epsilon / 3;
  const double want_delta = params.delta * params.delta / 10;
  if (base.epsilon > want_epsilon * (1 + 1e-12) ||
      base.delta > want_delta * (1 + 1e-12)) {
    return absl::FailedPreconditionError(
        absl::StrCat("base must be (", want_epsilon, ", ", want_delta,
                     ")-DP, declared (", base.epsilon, ", ", base.delta, ")"));
  }

  using Candidate = ScoredCandidate<std::vector<double>>;
  auto missing = std::make_shared<bool>(false);
  const std::size_t k = queries.size();
  Mechanism<Dataset, Candidate> scored;
  scored.epsilon = base.epsilon;
  scored.delta = base.delta;
  scored.run = [&base, missing, k](const Dataset& d, RandomStream& s) {
    ReleaseCandidate c = base.run(d, s);
    if (!c.certificate.has_value() || c.answers.size() != k) {
      *missing = true;
      return Candidate{std::move(c.answers), 0};
    }
    return Candidate{std::move(c.answers), -*c.certificate};
  };

  absl::StatusOr<BtmConfig> config = BtmConfig::Create(1, params.delta / 10);
  if (!config.ok()) return config.status();
  absl::StatusOr<Framework<Dataset>> framework =
      Framework<Dataset>::Create(1, dataset, std::move(stream));
  if (!framework.ok()) return framework.status();
  absl::StatusOr<std::optional<Candidate>> chosen =
      BetterThanMedian(scored, *config, *framework);
  if (!chosen.ok()) return chosen.status();
  if (*missing) {
    return absl::InvalidArgumentError(
        "base mechanism returned no certificate or a wrong answer count");
  }

  QueryReleaseResult result;
  const double threshold =
      QueryReleaseThreshold(params.constant, k, params.epsilon, params.delta);
  if (chosen->has_value()) {
    result.answers = std::move((*chosen)->payload);
    result.certificate = -(*chosen)->score;
  } else {
    result.empty = true;
    result.certificate = std::numeric_limits<double>::infinity();
  }
  if (result.certificate > threshold) {
    result.answers.clear();
    for (const auto& q : queries) result.answers.push_back(q(dataset));
    result.fallback = true;
  }
  result.cost = framework->PureCost();
  return result;
}

}  // namespace privsel

#endif  // PRIVSEL_QUERY_RELEASE_H_
