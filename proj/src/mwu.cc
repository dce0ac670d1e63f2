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

#include "privsel/mwu.h"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/noise.h"

namespace privsel {

Histogram Histogram::Uniform(std::size_t size) {
  return Histogram(std::vector<double>(size, 1.0 / size));
}

absl::StatusOr<Histogram> Histogram::FromWeights(std::vector<double> weights) {
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) {
      return absl::InvalidArgumentError(
          absl::StrCat("weights must be finite and nonnegative, got ", w));
    }
    total += w;
  }
  if (!(total > 0)) return absl::InvalidArgumentError("weights sum to zero");
  for (double& w : weights) w /= total;
  return Histogram(std::move(weights));
}

double Histogram::Expectation(std::span<const double> f) const {
  double sum = 0;
  for (std::size_t x = 0; x < p_.size(); ++x) sum += p_[x] * f[x];
  return sum;
}

Histogram MwuUpdate(const Histogram& h, std::span<const double> f,
                    int direction, double eta) {
  // Shift exponents by their maximum so no factor overflows.
  double top = -INFINITY;
  for (std::size_t x = 0; x < h.size(); ++x) {
    top = std::max(top, direction * eta * f[x]);
  }
  std::vector<double> w(h.size());
  for (std::size_t x = 0; x < h.size(); ++x) {
    w[x] = h[x] * std::exp(direction * eta * f[x] - top);
  }
  return *Histogram::FromWeights(std::move(w));
}

Histogram SampleEmpirical(const Histogram& population, std::int64_t n,
                          RandomStream& stream) {
  // Multinomial counts as a chain of conditional binomials.
  std::vector<double> counts(population.size(), 0);
  std::int64_t left = n;
  double mass = 1;
  for (std::size_t x = 0; x < population.size() && left > 0; ++x) {
    const double q = mass > 0 ? std::clamp(population[x] / mass, 0.0, 1.0) : 1;
    const std::int64_t c =
        x + 1 == population.size()
            ? left
            : std::binomial_distribution<std::int64_t>(left, q)(stream);
    counts[x] = static_cast<double>(c);
    left -= c;
    mass -= population[x];
  }
  return *Histogram::FromWeights(std::move(counts));
}

namespace {

absl::Status ValidateInputs(const MwuInputs& in) {
  if (in.universe < 2) {
    return absl::InvalidArgumentError("universe needs at least 2 elements");
  }
  if (in.n < 1 || in.m < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n >= 1 and m >= 2, got ", in.n, ", ", in.m));
  }
  if (!(in.epsilon > 0) || !(in.constant > 0)) {
    return absl::InvalidArgumentError("epsilon and C must be positive");
  }
  if (!(in.delta > 0 && in.delta < 1) || !(in.beta > 0 && in.beta < 1)) {
    return absl::InvalidArgumentError("delta and beta must lie in (0, 1)");
  }
  if (static_cast<double>(in.m) * std::log(2.0) < std::log(1 / in.beta)) {
    return absl::InvalidArgumentError("beta must be at least 2^-m");
  }
  return absl::OkStatus();
}

// A = sqrt(ln|X| ln(1/delta)) ln(m), B = ln(1/beta).
double TermA(const MwuInputs& in) {
  return std::sqrt(std::log(static_cast<double>(in.universe)) *
                   std::log(1 / in.delta)) *
         std::log(static_cast<double>(in.m));
}

double TermB(const MwuInputs& in) { return std::log(1 / in.beta); }

}  // namespace

absl::StatusOr<double> SolveAlpha(const MwuInputs& inputs) {
  if (absl::Status s = ValidateInputs(inputs); !s.ok()) return s;
  const double scale =
      inputs.constant / (static_cast<double>(inputs.n) * inputs.epsilon);
  const double a = scale * TermA(inputs);
  const double b = scale * TermB(inputs);
  // alpha - a / alpha - b is increasing, so the fixed point is unique.
  auto excess = [a, b](double alpha) { return alpha - a / alpha - b; };
  if (!(excess(1) > 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no accuracy fixed point below 1; n = ", inputs.n, " is too small"));
  }
  double lo = 0, hi = 1;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? hi : lo) = mid;
  }
  return hi;
}

absl::StatusOr<std::int64_t> SampleSizeFor(double alpha, MwuInputs inputs) {
  inputs.n = 1;
  if (absl::Status s = ValidateInputs(inputs); !s.ok()) return s;
  if (!(alpha > 0 && alpha < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", alpha));
  }
  const double n = inputs.constant *
                   (TermA(inputs) / (alpha * alpha) + TermB(inputs) / alpha) /
                   inputs.epsilon;
  return static_cast<std::int64_t>(std::ceil(n));
}

absl::StatusOr<MwuConfig> MakeMwuConfig(const MwuInputs& inputs) {
  absl::StatusOr<double> alpha = SolveAlpha(inputs);
  if (!alpha.ok()) return alpha.status();
  MwuConfig config;
  config.inputs = inputs;
  config.alpha = *alpha;
  const double budget =
      std::ceil(std::log(static_cast<double>(inputs.universe)) /
                (config.alpha * config.alpha));
  if (!(budget < INT_MAX)) {
    return absl::InvalidArgumentError("update budget overflows");
  }
  config.update_budget = static_cast<std::int64_t>(budget);
  config.eta = config.alpha / 2;
  config.svt_queries = 4 * inputs.m;
  config.svt_beta =
      std::min(inputs.beta, 1.0 / static_cast<double>(config.svt_queries)) / 2;
  absl::StatusOr<SvtConfig> svt = SvtParams(
      inputs.epsilon, inputs.delta, static_cast<int>(config.update_budget),
      config.svt_queries, config.svt_beta, 1.0 / static_cast<double>(inputs.n));
  if (!svt.ok()) return svt.status();
  config.svt = *svt;
  return config;
}

PrivateMwu::PrivateMwu(const MwuConfig& config, std::unique_ptr<Dataset> data,
                       std::unique_ptr<Framework<Dataset>> framework,
                       Histogram h)
    : config_(config),
      data_(std::move(data)),
      framework_(std::move(framework)),
      h_(std::move(h)) {}

absl::StatusOr<PrivateMwu> PrivateMwu::Create(
    const MwuConfig& config, const Histogram& empirical, RandomStream stream,
    std::optional<Histogram> initial) {
  const auto size = static_cast<std::size_t>(config.inputs.universe);
  if (empirical.size() != size) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dataset histogram has ", empirical.size(), " cells, expected ", size));
  }
  if (initial.has_value() && initial->size() != size) {
    return absl::InvalidArgumentError("initial histogram has the wrong size");
  }
  auto data = std::make_unique<Dataset>(Dataset{empirical});
  FrameworkOptions options;
  options.base_epsilon = config.svt.epsilon_prime;
  absl::StatusOr<Framework<Dataset>> framework = Framework<Dataset>::Create(
      config.svt.gamma, *data, std::move(stream), options);
  if (!framework.ok()) return framework.status();
  PrivateMwu session(
      config, std::move(data),
      std::make_unique<Framework<Dataset>>(*std::move(framework)),
      initial.has_value() ? *std::move(initial) : Histogram::Uniform(size));
  absl::StatusOr<RepetitiveSvt<Dataset>> svt =
      RepetitiveSvt<Dataset>::Create(config.svt, *session.framework_);
  if (!svt.ok()) return svt.status();
  session.svt_.emplace(*std::move(svt));
  return session;
}

absl::StatusOr<std::optional<Verdict>> PrivateMwu::Check(const LinearQuery& f,
                                                         int sign,
                                                         double offset,
                                                         double threshold) {
  SvtQuery<Dataset> query{[&f, sign, offset](const Dataset& d) {
                            return sign * d.empirical.Expectation(f) - offset;
                          },
                          threshold};
  absl::StatusOr<std::optional<Verdict>> verdict = svt_->Process(query);
  if (verdict.ok() && !verdict->has_value()) halted_ = true;
  return verdict;
}

absl::StatusOr<double> PrivateMwu::Answer(const LinearQuery& f) {
  if (halted_) return absl::FailedPreconditionError("MWU session has halted");
  if (f.size() != h_.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "query has ", f.size(), " entries, universe has ", h_.size()));
  }
  for (double v : f) {
    if (!(v >= 0 && v <= 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("query values must lie in [0, 1], got ", v));
    }
  }
  auto exhausted = [] {
    return absl::ResourceExhaustedError("SVT budget exhausted");
  };
  const double alpha = config_.alpha;
  const double guess = h_.Expectation(f);

  // |E_D f - guess| <~ alpha, as two one-sided queries.
  absl::StatusOr<std::optional<Verdict>> upper = Check(f, 1, guess, alpha);
  if (!upper.ok()) return upper.status();
  if (!upper->has_value()) return exhausted();
  if (**upper == Verdict::kBot) {
    absl::StatusOr<std::optional<Verdict>> lower = Check(f, -1, -guess, alpha);
    if (!lower.ok()) return lower.status();
    if (!lower->has_value()) return exhausted();
    if (**lower == Verdict::kBot) return std::clamp(guess, 0.0, 1.0);
  }

  // Update round: release a Laplace estimate, retest it at alpha / 2 and
  // redraw a bounded number of times.
  const double truth = data_->empirical.Expectation(f);
  const double scale =
      1 / (static_cast<double>(config_.inputs.n) * config_.svt.epsilon_prime);
  double estimate = truth;
  for (int draw = 0; draw <= config_.max_redraws; ++draw) {
    estimate = truth + *SampleLaplace(framework_->stream(), scale);
    if (absl::Status s =
            framework_->ChargeRelease(config_.svt.epsilon_prime, 0);
        !s.ok()) {
      return s;
    }
    ++releases_;
    if (draw == config_.max_redraws) break;
    absl::StatusOr<std::optional<Verdict>> hi =
        Check(f, 1, estimate, alpha / 2);
    if (!hi.ok()) return hi.status();
    if (!hi->has_value()) return exhausted();
    if (**hi == Verdict::kBot) {
      absl::StatusOr<std::optional<Verdict>> lo =
          Check(f, -1, -estimate, alpha / 2);
      if (!lo.ok()) return lo.status();
      if (!lo->has_value()) return exhausted();
      if (**lo == Verdict::kBot) break;
    }
    ++rejected_;
  }
  const int direction = estimate > guess ? 1 : (estimate < guess ? -1 : 0);
  h_ = MwuUpdate(h_, f, direction, config_.eta);
  ++update_rounds_;
  return std::clamp(estimate, 0.0, 1.0);
}

}  // namespace privsel
