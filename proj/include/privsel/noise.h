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

// Samplers for the distributions used by the selection framework. Every
// sampler is a deterministic function of the stream state and its arguments.

#ifndef PRIVSEL_NOISE_H_
#define PRIVSEL_NOISE_H_

#include <cstddef>
#include <span>

#include "absl/status/statusor.h"
#include "privsel/random_stream.h"

namespace privsel {

// Laplace(0, scale): density proportional to exp(-|v| / scale).
absl::StatusOr<double> SampleLaplace(RandomStream& stream, double scale);

// CDF of Laplace(0, scale) at x. Assumes scale > 0.
double LaplaceCdf(double x, double scale);

// Parameters of TLap(epsilon, delta), the Laplace density exp(-epsilon |v|)
// restricted to [-R, R] with R = ln(1 / delta) / epsilon.
class TruncatedLaplaceParams {
 public:
  static absl::StatusOr<TruncatedLaplaceParams> Create(double epsilon,
                                                       double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double radius() const { return radius_; }

 private:
  TruncatedLaplaceParams(double epsilon, double delta, double radius)
      : epsilon_(epsilon), delta_(delta), radius_(radius) {}

  double epsilon_;
  double delta_;
  double radius_;
};

// Exact inverse-CDF draw from TLap; the result always lies in [-R, R].
double SampleTruncatedLaplace(RandomStream& stream,
                              const TruncatedLaplaceParams& params);

// Pass probability with Pr[p <= x] = x^gamma, drawn as U^(1 / gamma).
absl::StatusOr<double> SamplePassProbability(RandomStream& stream,
                                             double gamma);

absl::StatusOr<bool> SampleBernoulli(RandomStream& stream, double p);

// Returns index i with probability proportional to
// exp(epsilon * scores[i] / (2 * sensitivity)).
absl::StatusOr<std::size_t> ExponentialMechanism(RandomStream& stream,
                                                 std::span<const double> scores,
                                                 double epsilon,
                                                 double sensitivity);

}  // namespace privsel

#endif  // PRIVSEL_NOISE_H_
