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

// The Selection/Test framework. One instance draws a pass probability p once,
// with Pr[p <= x] = x^gamma, and gates every mechanism run and hypothesis
// evaluation by an independent Ber(p) coin. Selection returns the best value
// among the runs that fired; Test returns BOT without looking at the data
// when its coin is 0. The shared ledger charges 2 epsilon per Selection call
// and per TOP answer, plus gamma epsilon once.

#ifndef PRIVSEL_FRAMEWORK_H_
#define PRIVSEL_FRAMEWORK_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/ledger.h"
#include "privsel/noise.h"
#include "privsel/random_stream.h"

namespace privsel {

enum class Verdict { kBot, kTop };

// A randomized algorithm on Dataset with an ordered output. epsilon and
// delta are the caller's per-run guarantee; they are never checked.
template <typename Dataset, typename Value>
struct Mechanism {
  std::function<Value(const Dataset&, RandomStream&)> run;
  double epsilon = 0;
  double delta = 0;
};

template <typename Dataset>
struct Hypothesis {
  std::function<Verdict(const Dataset&, RandomStream&)> run;
  double epsilon = 0;
  double delta = 0;
  // Optional exact Pr[run(D) == kTop]. When present, RepeatTest may sample a
  // whole batch at once instead of looping.
  std::function<double(const Dataset&)> top_probability;
};

struct SelectOptions {
  // Replaces the default tau * sum(delta_i) charge when an application has a
  // tighter certified bound.
  std::optional<double> delta_mass;
};

struct FrameworkOptions {
  // Fixes the base epsilon up front instead of taking it from the first
  // mechanism or hypothesis seen.
  std::optional<double> base_epsilon;
  // Lets RepeatTest draw a batch outcome directly when the hypothesis
  // exposes top_probability. The law of the outcome is unchanged.
  bool batch_repeated_tests = true;
};

struct RepeatedTestOutcome {
  std::int64_t calls = 0;  // Test calls made, at most max_calls
  bool top = false;        // whether the last call returned TOP
};

template <typename Dataset>
class Framework {
 public:
  static absl::StatusOr<Framework> Create(double gamma, const Dataset& dataset,
                                          RandomStream stream,
                                          FrameworkOptions options = {}) {
    absl::StatusOr<double> p = SamplePassProbability(stream, gamma);
    if (!p.ok()) return p.status();
    return Framework(gamma, *p, dataset, std::move(stream), options);
  }

  // Uses the given p instead of sampling it. Meant for tests and for replaying
  // an externally recorded p.
  static absl::StatusOr<Framework> CreateWithPassProbability(
      double gamma, double p, const Dataset& dataset, RandomStream stream,
      FrameworkOptions options = {}) {
    if (!(gamma > 0) || !std::isfinite(gamma)) {
      return absl::InvalidArgumentError(
          absl::StrCat("gamma must be positive, got ", gamma));
    }
    if (!(p >= 0 && p <= 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("pass probability must lie in [0, 1], got ", p));
    }
    return Framework(gamma, p, dataset, std::move(stream), options);
  }

  // Runs each mechanism tau times behind Ber(p) coins and returns the largest
  // value collected, or nullopt when nothing fired. Ties keep the earliest.
  template <typename Value>
  absl::StatusOr<std::optional<Value>> Select(
      std::int64_t tau,
      const std::vector<Mechanism<Dataset, Value>>& mechanisms,
      const SelectOptions& options = {}) {
    if (tau < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("tau must be at least 1, got ", tau));
    }
    if (mechanisms.empty()) {
      return absl::InvalidArgumentError("Select needs at least one mechanism");
    }
    double delta_sum = 0;
    for (const auto& mechanism : mechanisms) {
      if (absl::Status s = ledger_.Admit(mechanism.epsilon); !s.ok()) return s;
      delta_sum += mechanism.delta;
    }
    ledger_.ChargeSelection(options.delta_mass.value_or(tau * delta_sum));

    std::optional<Value> best;
    for (const auto& mechanism : mechanisms) {
      for (std::int64_t j = 0; j < tau; ++j) {
        if (!(stream_.Uniform() < p_)) continue;
        ++mechanism_runs_;
        Value value = mechanism.run(*dataset_, stream_);
        if (!best.has_value() || *best < value) best = std::move(value);
      }
    }
    return best;
  }

  absl::StatusOr<Verdict> Test(const Hypothesis<Dataset>& hypothesis) {
    if (absl::Status s = ledger_.Admit(hypothesis.epsilon); !s.ok()) return s;
    return GatedTest(hypothesis);
  }

  // Calls Test up to max_calls times and stops at the first TOP.
  absl::StatusOr<RepeatedTestOutcome> RepeatTest(
      const Hypothesis<Dataset>& hypothesis, std::int64_t max_calls) {
    if (max_calls < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("max_calls must be at least 1, got ", max_calls));
    }
    if (absl::Status s = ledger_.Admit(hypothesis.epsilon); !s.ok()) return s;
    if (options_.batch_repeated_tests && hypothesis.top_probability) {
      return BatchedRepeatTest(hypothesis, max_calls);
    }
    RepeatedTestOutcome outcome;
    while (outcome.calls < max_calls) {
      ++outcome.calls;
      if (GatedTest(hypothesis) == Verdict::kTop) {
        outcome.top = true;
        break;
      }
    }
    return outcome;
  }

  // Records an epsilon-DP release made outside Selection and Test, such as a
  // Laplace estimate. It costs 2 epsilon, the same as a TOP answer.
  absl::Status ChargeRelease(double epsilon, double delta) {
    if (absl::Status s = ledger_.Admit(epsilon); !s.ok()) return s;
    ledger_.ChargeRelease(delta);
    return absl::OkStatus();
  }

  PrivacyCost PureCost() const { return PureDpCost(ledger_, gamma_); }
  absl::StatusOr<PrivacyCost> ApproxCost(double delta_target) const {
    return ApproxDpCost(ledger_, gamma_, delta_target);
  }

  double gamma() const { return gamma_; }
  double pass_probability() const { return p_; }
  const PrivacyLedger& ledger() const { return ledger_; }
  const Dataset& dataset() const { return *dataset_; }
  RandomStream& stream() { return stream_; }
  // Instrumentation: how many times the data was actually read.
  std::int64_t mechanism_runs() const { return mechanism_runs_; }
  std::int64_t hypothesis_evaluations() const {
    return hypothesis_evaluations_;
  }

 private:
  Framework(double gamma, double p, const Dataset& dataset, RandomStream stream,
            const FrameworkOptions& options)
      : gamma_(gamma),
        p_(p),
        dataset_(&dataset),
        stream_(std::move(stream)),
        options_(options),
        ledger_(options.base_epsilon) {}

  Verdict GatedTest(const Hypothesis<Dataset>& hypothesis) {
    if (!(stream_.Uniform() < p_)) return Verdict::kBot;
    ++hypothesis_evaluations_;
    ledger_.AccrueDelta(hypothesis.delta);
    const Verdict verdict = hypothesis.run(*dataset_, stream_);
    if (verdict == Verdict::kTop) ledger_.ChargeTop();
    return verdict;
  }

  // Same law as the literal loop: each call is TOP independently with
  // probability p * q, so the first TOP arrives after a geometric number of
  // quiet calls, and each quiet call read the data with probability
  // p (1 - q) / (1 - p q).
  RepeatedTestOutcome BatchedRepeatTest(const Hypothesis<Dataset>& hypothesis,
                                        std::int64_t max_calls) {
    const double q = hypothesis.top_probability(*dataset_);
    const double s = p_ * q;
    std::int64_t quiet = max_calls;
    if (s >= 1) {
      quiet = 0;
    } else if (s > 0) {
      const double g =
          std::floor(std::log(stream_.UniformOpen()) / std::log1p(-s));
      if (g < static_cast<double>(max_calls))
        quiet = static_cast<std::int64_t>(g);
    }
    RepeatedTestOutcome outcome;
    outcome.top = quiet < max_calls;
    outcome.calls = outcome.top ? quiet + 1 : max_calls;

    std::int64_t evaluations = 0;
    const double read_given_quiet = s >= 1 ? 0 : p_ * (1 - q) / (1 - s);
    if (quiet > 0 && read_given_quiet > 0) {
      std::binomial_distribution<std::int64_t> reads(
          quiet, std::min(1.0, read_given_quiet));
      evaluations = reads(stream_);
    }
    if (outcome.top) {
      ++evaluations;
      ledger_.ChargeTop();
    }
    hypothesis_evaluations_ += evaluations;
    ledger_.AccrueDelta(hypothesis.delta * static_cast<double>(evaluations));
    return outcome;
  }

  double gamma_;
  double p_;
  const Dataset* dataset_;
  RandomStream stream_;
  FrameworkOptions options_;
  PrivacyLedger ledger_;
  std::int64_t mechanism_runs_ = 0;
  std::int64_t hypothesis_evaluations_ = 0;
};

}  // namespace privsel

#endif  // PRIVSEL_FRAMEWORK_H_
