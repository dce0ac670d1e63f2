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

#include "privsel/coin_game.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "privsel/random_stream.h"

namespace privsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-12;

bool AtMost(double lhs, double rhs) {
  return lhs <= rhs + kSlack * std::max(1.0, std::abs(rhs));
}

// P (P / Q)^(alpha - 1), with the conventions 0 * anything = 0 and
// P / 0 = infinity.
double MomentTerm(double p_mass, double q_mass, double alpha) {
  if (p_mass <= 0) return 0;
  if (q_mass <= 0) return kInf;
  return std::exp(alpha * std::log(p_mass) - (alpha - 1) * std::log(q_mass));
}

double LogRatio(double p_mass, double q_mass) {
  if (p_mass <= 0) return -kInf;
  if (q_mass <= 0) return kInf;
  return std::log(p_mass) - std::log(q_mass);
}

absl::Status CheckHorizon(const DeterministicAdversary& adversary,
                          int horizon) {
  if (horizon < 0 || horizon > static_cast<int>(adversary.pairs().size())) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "horizon %d outside [0, %d]", horizon, adversary.pairs().size()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidatePair(const QueryPair& pair, double epsilon) {
  const double p = pair.p, q = pair.q;
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be positive, got %g", epsilon));
  }
  if (!(p >= 0 && p <= 1 && q >= 0 && q <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("pair (%g, %g) is not a pair of probabilities", p, q));
  }
  const double e = std::exp(epsilon);
  if (!AtMost(q, p)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("pair (%g, %g) violates q <= p", p, q));
  }
  if (!AtMost(p, e * q)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "pair (%g, %g) violates p <= e^eps * q at eps = %g", p, q, epsilon));
  }
  if (!AtMost(1 - q, e * (1 - p))) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "pair (%g, %g) violates 1 - q <= e^eps * (1 - p) at eps = %g", p, q,
        epsilon));
  }
  if (!AtMost(1 - p, e * (1 - q))) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "pair (%g, %g) violates 1 - p <= e^eps * (1 - q) at eps = %g", p, q,
        epsilon));
  }
  return absl::OkStatus();
}

QueryPair RandomValidPair(RandomStream& stream, double epsilon) {
  const double q = stream.UniformOpen();
  const double upper =
      std::min({1.0, std::exp(epsilon) * q, 1 - std::exp(-epsilon) * (1 - q)});
  const bool on_edge = stream.Uniform() < 0.5;
  const double p = on_edge ? upper : q + (upper - q) * stream.Uniform();
  return {std::max(p, q), q};
}

absl::StatusOr<DeterministicAdversary> DeterministicAdversary::Create(
    std::vector<QueryPair> pairs, double epsilon) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (absl::Status s = ValidatePair(pairs[i], epsilon); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("round %d: %s", i + 1, s.message()));
    }
  }
  return DeterministicAdversary(std::move(pairs), epsilon);
}

absl::StatusOr<std::vector<int>> RunCoinGame(int b, double epsilon, int k,
                                             const QuerySource& source,
                                             RandomStream& stream,
                                             std::int64_t max_rounds) {
  if (b != 0 && b != 1) {
    return absl::InvalidArgumentError("input bit must be 0 or 1");
  }
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  std::vector<int> transcript;
  int ones = 0;
  while (ones < k &&
         static_cast<std::int64_t>(transcript.size()) < max_rounds) {
    const std::optional<QueryPair> pair = source(transcript);
    if (!pair.has_value()) break;
    if (absl::Status s = ValidatePair(*pair, epsilon); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("query rejected in round %d: %s",
                          transcript.size() + 1, s.message()));
    }
    const int bit = stream.Uniform() < (b == 0 ? pair->p : pair->q) ? 1 : 0;
    transcript.push_back(bit);
    ones += bit;
  }
  return transcript;
}

absl::StatusOr<TranscriptDistribution> HaltingDistribution(
    const DeterministicAdversary& adversary, int b, int horizon) {
  if (b != 0 && b != 1) {
    return absl::InvalidArgumentError("input bit must be 0 or 1");
  }
  if (absl::Status s = CheckHorizon(adversary, horizon); !s.ok()) return s;
  TranscriptDistribution out;
  double survive = 1;
  for (int i = 0; i < horizon; ++i) {
    const QueryPair& pair = adversary.pairs()[i];
    const double one = b == 0 ? pair.p : pair.q;
    out.halt.push_back(survive * one);
    survive *= 1 - one;
  }
  out.tail = survive;
  return out;
}

absl::StatusOr<double> ExactRenyi(const DeterministicAdversary& adversary,
                                  double alpha, int horizon) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "alpha must be a finite number above 1, got %g", alpha));
  }
  absl::StatusOr<TranscriptDistribution> p =
      HaltingDistribution(adversary, 0, horizon);
  if (!p.ok()) return p.status();
  absl::StatusOr<TranscriptDistribution> q =
      HaltingDistribution(adversary, 1, horizon);
  if (!q.ok()) return q.status();
  double total = MomentTerm(p->tail, q->tail, alpha);
  for (int i = 0; i < horizon; ++i) {
    total += MomentTerm(p->halt[i], q->halt[i], alpha);
  }
  return total;
}

absl::StatusOr<double> ExactMaxDivergence(
    const DeterministicAdversary& adversary, int horizon) {
  absl::StatusOr<TranscriptDistribution> p =
      HaltingDistribution(adversary, 0, horizon);
  if (!p.ok()) return p.status();
  absl::StatusOr<TranscriptDistribution> q =
      HaltingDistribution(adversary, 1, horizon);
  if (!q.ok()) return q.status();
  double worst = LogRatio(p->tail, q->tail);
  for (int i = 0; i < horizon; ++i) {
    worst = std::max(worst, LogRatio(p->halt[i], q->halt[i]));
  }
  return worst;
}

absl::StatusOr<BernoulliRenyiResult> BernoulliRenyiCheck(double p, double q,
                                                         double epsilon,
                                                         double alpha) {
  if (!(p >= 0 && p <= 1 && q >= 0 && q <= 1)) {
    return absl::InvalidArgumentError("p and q must lie in [0, 1]");
  }
  if (!(epsilon > 0) || !(alpha > 1)) {
    return absl::InvalidArgumentError("need epsilon > 0 and alpha > 1");
  }
  if (!AtMost(alpha * epsilon, 1.0 / 3)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha * eps = %g exceeds 1/3", alpha * epsilon));
  }
  const double e = std::exp(epsilon);
  if (!AtMost(p, e * q) || !AtMost(q, e * p)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "p = %g and q = %g are not e^eps-close at eps = %g", p, q, epsilon));
  }
  if (!AtMost(1 - p, e * (1 - q)) || !AtMost(1 - q, e * (1 - p))) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "1 - p = %g and 1 - q = %g are not e^eps-close at eps = %g", 1 - p,
        1 - q, epsilon));
  }
  BernoulliRenyiResult result;
  result.value = MomentTerm(p, q, alpha) + MomentTerm(1 - p, 1 - q, alpha);
  result.bound = 1 + alpha * (alpha - 1) * epsilon * epsilon;
  result.holds = result.value <= result.bound;
  return result;
}

namespace {

class Enumerator {
 public:
  Enumerator(const QuerySource& adversary, double epsilon, int k,
             int length_cap, std::span<const double> alphas)
      : adversary_(adversary),
        epsilon_(epsilon),
        k_(k),
        length_cap_(length_cap),
        alphas_(alphas) {
    result_.renyi_moments.assign(alphas.size(), 0);
    result_.max_log_ratio = -kInf;
  }

  absl::Status Walk(int ones, double p_mass, double q_mass) {
    if (p_mass <= 0) return absl::OkStatus();  // contributes nothing
    const bool capped = static_cast<int>(transcript_.size()) >= length_cap_;
    std::optional<QueryPair> pair;
    if (ones < k_ && !capped) pair = adversary_(transcript_);
    if (!pair.has_value()) {
      Record(p_mass, q_mass);
      if (ones < k_ && capped) result_.capped_mass += p_mass;
      return absl::OkStatus();
    }
    if (absl::Status s = ValidatePair(*pair, epsilon_); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("query rejected after %d rounds: %s",
                          transcript_.size(), s.message()));
    }
    transcript_.push_back(1);
    absl::Status s = Walk(ones + 1, p_mass * pair->p, q_mass * pair->q);
    transcript_.back() = 0;
    if (s.ok()) s = Walk(ones, p_mass * (1 - pair->p), q_mass * (1 - pair->q));
    transcript_.pop_back();
    return s;
  }

  GameDivergence Finish() {
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      result_.renyi.push_back(std::log(result_.renyi_moments[i]) /
                              (alphas_[i] - 1));
    }
    return std::move(result_);
  }

 private:
  void Record(double p_mass, double q_mass) {
    ++result_.outcomes;
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      result_.renyi_moments[i] += MomentTerm(p_mass, q_mass, alphas_[i]);
    }
    result_.max_log_ratio =
        std::max(result_.max_log_ratio, LogRatio(p_mass, q_mass));
  }

  const QuerySource& adversary_;
  double epsilon_;
  int k_;
  int length_cap_;
  std::span<const double> alphas_;
  std::vector<int> transcript_;
  GameDivergence result_;
};

}  // namespace

absl::StatusOr<GameDivergence> EnumerateCoinGame(
    const QuerySource& adversary, double epsilon, int k, int length_cap,
    std::span<const double> alphas) {
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (length_cap < 0 || length_cap > 30) {
    return absl::InvalidArgumentError(
        absl::StrFormat("length cap %d outside [0, 30]", length_cap));
  }
  for (double alpha : alphas) {
    if (!(alpha > 1) || !std::isfinite(alpha)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "alpha must be a finite number above 1, got %g", alpha));
    }
  }
  Enumerator enumerator(adversary, epsilon, k, length_cap, alphas);
  if (absl::Status s = enumerator.Walk(0, 1, 1); !s.ok()) return s;
  return enumerator.Finish();
}

}  // namespace privsel
