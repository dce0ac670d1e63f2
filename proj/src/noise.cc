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

#include "privsel/noise.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/random_stream.h"

namespace privsel {

absl::StatusOr<double> SampleLaplace(RandomStream& stream, double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive and finite, got ", scale));
  }
  const double u = stream.UniformOpen();
  if (u < 0.5) return scale * std::log(2 * u);
  return -scale * std::log(2 * (1 - u));
}

double LaplaceCdf(double x, double scale) {
  if (x < 0) return 0.5 * std::exp(x / scale);
  return 1 - 0.5 * std::exp(-x / scale);
}

absl::StatusOr<TruncatedLaplaceParams> TruncatedLaplaceParams::Create(
    double epsilon, double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("TLap epsilon must be positive, got ", epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("TLap delta must lie in (0, 1), got ", delta));
  }
  return TruncatedLaplaceParams(epsilon, delta, -std::log(delta) / epsilon);
}

double SampleTruncatedLaplace(RandomStream& stream,
                              const TruncatedLaplaceParams& params) {
  // |v| has density proportional to exp(-epsilon v) on [0, R], and
  // 1 - exp(-epsilon R) = 1 - delta.
  const double u = stream.Uniform();
  const double magnitude =
      std::min(-std::log1p(-u * (1 - params.delta())) / params.epsilon(),
               params.radius());
  return (stream() >> 63) ? -magnitude : magnitude;
}

absl::StatusOr<double> SamplePassProbability(RandomStream& stream,
                                             double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must be positive, got ", gamma));
  }
  return std::pow(stream.Uniform(), 1 / gamma);
}

absl::StatusOr<bool> SampleBernoulli(RandomStream& stream, double p) {
  if (!(p >= 0 && p <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Bernoulli probability must lie in [0, 1], got ", p));
  }
  return stream.Uniform() < p;
}

absl::StatusOr<std::size_t> ExponentialMechanism(RandomStream& stream,
                                                 std::span<const double> scores,
                                                 double epsilon,
                                                 double sensitivity) {
  if (scores.empty()) {
    return absl::InvalidArgumentError("exponential mechanism needs scores");
  }
  if (!(epsilon > 0) || !(sensitivity > 0)) {
    return absl::InvalidArgumentError(
        "epsilon and sensitivity must be positive");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  const double factor = epsilon / (2 * sensitivity);
  std::vector<double> weights(scores.size());
  double total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(factor * (scores[i] - top));
    total += weights[i];
  }
  double target = stream.Uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  // Rounding left a sliver of mass past the end; give it to the last
  // index with positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;
  }
  return scores.size() - 1;
}

}  // namespace privsel
