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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/better_than_median.h"
#include "privsel/query_release.h"
#include "privsel/stable_selection.h"
#include "privsel/top_k.h"

namespace privsel {

absl::StatusOr<BtmConfig> BtmConfig::Create(double alpha, double beta) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be positive, got ", alpha));
  }
  if (!(beta > 0 && beta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in (0, 1), got ", beta));
  }
  double calls;
  if (alpha == 1) {
    calls = std::ceil(2 / beta);
  } else {
    calls = std::ceil(5 * std::pow(2 / beta, 1 / alpha) * std::log(1 / beta));
  }
  if (!(calls < 9e18)) {
    return absl::InvalidArgumentError("oracle-call budget overflows");
  }
  return BtmConfig(alpha, beta,
                   std::max<std::int64_t>(1, static_cast<std::int64_t>(calls)));
}

absl::StatusOr<double> Gap(std::span<const std::size_t> selected,
                           std::span<const double> scores) {
  const std::size_t m = scores.size();
  if (selected.empty() || selected.size() >= m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need 0 < |S| < m, got |S| = ", selected.size(), ", m = ", m));
  }
  std::vector<bool> in(m, false);
  double worst_in = std::numeric_limits<double>::infinity();
  for (std::size_t j : selected) {
    if (j >= m) {
      return absl::InvalidArgumentError(
          absl::StrCat("index ", j, " out of range for m = ", m));
    }
    if (in[j]) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate index ", j));
    }
    in[j] = true;
    worst_in = std::min(worst_in, scores[j]);
  }
  double best_out = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (!in[i]) best_out = std::max(best_out, scores[i]);
  }
  return best_out - worst_in;
}

double TopKGapBound(double constant, int k, std::size_t m, double epsilon,
                    double delta, double beta) {
  return constant * std::sqrt(k * std::log(1 / delta)) *
             std::log(static_cast<double>(m)) / epsilon +
         constant * std::log(1 / beta) / epsilon;
}

PeelingSampler::PeelingSampler(std::span<const double> scores, double epsilon,
                               double sensitivity) {
  const double top = *std::max_element(scores.begin(), scores.end());
  log_weights_.reserve(scores.size());
  weights_.reserve(scores.size());
  for (double s : scores) {
    const double lw = epsilon * (s - top) / (2 * sensitivity);
    log_weights_.push_back(lw);
    weights_.push_back(std::exp(lw));
  }
}

std::vector<std::size_t> PeelingSampler::Sample(RandomStream& stream,
                                                int k) const {
  std::vector<double> w = weights_;
  std::vector<bool> taken(w.size(), false);
  std::vector<std::size_t> out;
  out.reserve(k);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (int round = 0; round < k; ++round) {
    if (!(total > 0)) {
      // Everything left underflowed; renormalize against the best remaining.
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!taken[i]) top = std::max(top, log_weights_[i]);
      }
      total = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = taken[i] ? 0 : std::exp(log_weights_[i] - top);
        total += w[i];
      }
    }
    const double target = stream.Uniform() * total;
    double acc = 0;
    std::size_t pick = w.size();
    std::size_t last = w.size();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (taken[i]) continue;
      last = i;
      acc += w[i];
      if (target < acc) {
        pick = i;
        break;
      }
    }
    if (pick == w.size()) pick = last;  // rounding at the top end
    taken[pick] = true;
    total -= w[pick];
    w[pick] = 0;
    out.push_back(pick);
  }
  return out;
}

namespace internal {

std::vector<std::size_t> ExactTopK(std::span<const double> scores, int k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(
      order.begin(), order.end(),
      [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

absl::Status ValidateChoiceParams(const ChoiceParams& params) {
  for (double x : {params.epsilon, params.delta, params.beta}) {
    if (!(x > 0 && x < 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon, delta and beta must lie in (0, 1), got ", x));
    }
  }
  return absl::OkStatus();
}

}  // namespace internal

std::int64_t ChoosingRepetitions(double beta) {
  return static_cast<std::int64_t>(std::ceil(4 / beta));
}

std::int64_t StableRepetitions(double beta) {
  return static_cast<std::int64_t>(std::ceil(2 / beta));
}

absl::StatusOr<double> KthGapReference(std::span<const double> scores, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= scores.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 0 <= k < m, got k = ", k, ", m = ", scores.size()));
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + k, sorted.end(),
                   std::greater<double>());
  return sorted[k];
}

double QueryReleaseThreshold(double constant, std::size_t k, double epsilon,
                             double delta) {
  const double l = std::log(1 / delta);
  return constant * (std::sqrt(k * l) + l) / epsilon;
}

double CertificateOffset(double epsilon, double delta) {
  return 2 * std::log(2 / delta) / epsilon;
}

}  // namespace privsel
