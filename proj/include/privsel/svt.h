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

// Repetitive sparse vector technique. Each threshold query is settled by
// batches of tau framework tests, alternating between an upper test U
// (refutes f(D) <~ t) and a lower test V (refutes f(D) >~ t - d). Only failed
// batches cost privacy, and the run halts after k' of them.

#ifndef PRIVSEL_SVT_H_
#define PRIVSEL_SVT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "privsel/framework.h"
#include "privsel/noise.h"
#include "privsel/random_stream.h"

namespace privsel {

struct SvtConfig {
  double epsilon_prime = 0;  // each test adds Lap(sensitivity / epsilon_prime)
  double gamma = 0;
  double d = 0;              // gap between the two thresholds
  std::int64_t tau = 0;      // tests per batch
  std::int64_t k_prime = 0;  // failed batches before halting
  double sensitivity = 1;

  absl::Status Validate() const;
};

// epsilon / (gamma + sqrt(k ln(1/delta))) and, for the pure variant,
// epsilon / (gamma + k).
double ApproxEpsilonPrime(double epsilon, double gamma, int k, double delta);
double PureEpsilonPrime(double epsilon, double gamma, int k);

// Parameter recipe for at most m queries of which at most k are above
// threshold: gamma = ln(20/beta) / ln m, tau = 5 m^2,
// k' = k + ceil(7 ln(1/beta) / ln m), d = 10 sensitivity ln(m) / epsilon'.
// Requires beta in (2^-m, 1/m).
absl::StatusOr<SvtConfig> SvtParams(double epsilon, double delta, int k,
                                    std::int64_t m, double beta,
                                    double sensitivity, bool pure_dp = false);

// Single noisy comparisons. Above: TOP iff value + Lap(b) >= t. Below: TOP
// iff value + Lap(b) <= t - d. b = sensitivity / epsilon_prime.
Verdict TestAbove(double value, double t, double epsilon_prime,
                  double sensitivity, RandomStream& stream);
Verdict TestBelow(double value, double t, double d, double epsilon_prime,
                  double sensitivity, RandomStream& stream);

// Exact TOP probabilities of the two tests.
double AboveTopProbability(double value, double t, double epsilon_prime,
                           double sensitivity);
double BelowTopProbability(double value, double t, double d,
                           double epsilon_prime, double sensitivity);

template <typename Dataset>
struct SvtQuery {
  std::function<double(const Dataset&)> f;
  double threshold = 0;
};

template <typename Dataset>
Hypothesis<Dataset> AboveHypothesis(const SvtQuery<Dataset>& query,
                                    const SvtConfig& config) {
  const double eps = config.epsilon_prime;
  const double sens = config.sensitivity;
  return {[query, eps, sens](const Dataset& d, RandomStream& s) {
            return TestAbove(query.f(d), query.threshold, eps, sens, s);
          },
          eps, 0,
          [query, eps, sens](const Dataset& d) {
            return AboveTopProbability(query.f(d), query.threshold, eps, sens);
          }};
}

template <typename Dataset>
Hypothesis<Dataset> BelowHypothesis(const SvtQuery<Dataset>& query,
                                    const SvtConfig& config) {
  const double eps = config.epsilon_prime;
  const double sens = config.sensitivity;
  const double gap = config.d;
  return {[query, eps, sens, gap](const Dataset& d, RandomStream& s) {
            return TestBelow(query.f(d), query.threshold, gap, eps, sens, s);
          },
          eps, 0,
          [query, eps, sens, gap](const Dataset& d) {
            return BelowTopProbability(query.f(d), query.threshold, gap, eps,
                                       sens);
          }};
}

// One SVT session over a framework created with gamma = config.gamma. The
// framework must outlive the session.
template <typename Dataset>
class RepetitiveSvt {
 public:
  static absl::StatusOr<RepetitiveSvt> Create(const SvtConfig& config,
                                              Framework<Dataset>& framework) {
    if (absl::Status s = config.Validate(); !s.ok()) return s;
    if (framework.gamma() != config.gamma) {
      return absl::FailedPreconditionError(
          absl::StrCat("framework gamma ", framework.gamma(),
                       " differs from the SVT gamma ", config.gamma));
    }
    return RepetitiveSvt(config, framework);
  }

  // BOT claims f(D) <~ t; TOP claims f(D) >~ t - d. Returns nullopt when the
  // session halted while working on this query, which stays unanswered.
  absl::StatusOr<std::optional<Verdict>> Process(const SvtQuery<Dataset>& q) {
    if (halted_) return absl::FailedPreconditionError("SVT session has halted");
    last_batches_ = 0;
    bool upper = true;
    for (;;) {
      const Hypothesis<Dataset> h =
          upper ? AboveHypothesis(q, config_) : BelowHypothesis(q, config_);
      absl::StatusOr<RepeatedTestOutcome> batch =
          framework_->RepeatTest(h, config_.tau);
      if (!batch.ok()) return batch.status();
      ++last_batches_;
      if (!batch->top) break;
      ++failed_batches_;
      if (failed_batches_ == config_.k_prime) {
        halted_ = true;
        return std::nullopt;
      }
      upper = !upper;
    }
    ++answered_;
    if (upper) return Verdict::kBot;
    ++tops_;
    return Verdict::kTop;
  }

  bool halted() const { return halted_; }
  // The counter c: batches that ended in a TOP.
  std::int64_t failed_batches() const { return failed_batches_; }
  std::int64_t answered() const { return answered_; }
  std::int64_t top_responses() const { return tops_; }
  // Batches spent on the most recent query.
  std::int64_t last_batches() const { return last_batches_; }
  const SvtConfig& config() const { return config_; }
  Framework<Dataset>& framework() { return *framework_; }

 private:
  RepetitiveSvt(const SvtConfig& config, Framework<Dataset>& framework)
      : config_(config), framework_(&framework) {}

  SvtConfig config_;
  Framework<Dataset>* framework_;
  bool halted_ = false;
  std::int64_t failed_batches_ = 0;
  std::int64_t answered_ = 0;
  std::int64_t tops_ = 0;
  std::int64_t last_batches_ = 0;
};

}  // namespace privsel

#endif  // PRIVSEL_SVT_H_
