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

// The 0-favored coin game and exact divergence computations for it.
//
// In each round an adversary names a pair (p, q) with q <= p <= e^eps q and
// e^-eps-close complements. The game flips Ber(p) when b = 0 and Ber(q) when
// b = 1, shows the bit to the adversary, and stops after k ones. The
// functions below compute the exact law of the transcript under both bits so
// Renyi and max divergences can be compared with their analytic bounds.

#ifndef PRIVSEL_COIN_GAME_H_
#define PRIVSEL_COIN_GAME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privsel/random_stream.h"

namespace privsel {

struct QueryPair {
  double p = 0;
  double q = 0;
};

// Checks 0 <= q <= p <= e^eps q <= 1, 1 - q <= e^eps (1 - p) and
// 1 - p <= e^eps (1 - q). The error message names the violated inequality.
// A relative slack of 1e-12 absorbs rounding on boundary pairs.
absl::Status ValidatePair(const QueryPair& pair, double epsilon);

// A pair drawn uniformly from the valid region for a uniformly drawn q in
// (0, 1). With probability 1/2 p sits on the upper edge of the region.
QueryPair RandomValidPair(RandomStream& stream, double epsilon);

// A pre-committed schedule for k = 1: round i uses pairs[i].
class DeterministicAdversary {
 public:
  static absl::StatusOr<DeterministicAdversary> Create(
      std::vector<QueryPair> pairs, double epsilon);

  const std::vector<QueryPair>& pairs() const { return pairs_; }
  double epsilon() const { return epsilon_; }

 private:
  DeterministicAdversary(std::vector<QueryPair> pairs, double epsilon)
      : pairs_(std::move(pairs)), epsilon_(epsilon) {}

  std::vector<QueryPair> pairs_;
  double epsilon_;
};

// Next query given the bits seen so far, or nullopt to end the game.
using QuerySource =
    std::function<std::optional<QueryPair>(std::span<const int> transcript)>;

// Plays one game. Returns the transcript of bits. The game ends after k ones,
// when the source returns nullopt, or after max_rounds rounds.
absl::StatusOr<std::vector<int>> RunCoinGame(
    int b, double epsilon, int k, const QuerySource& source,
    RandomStream& stream, std::int64_t max_rounds = 10000000);

// Law of the halting round for k = 1: halt[i - 1] = Pr[P = i] for i <= m and
// tail = Pr[P > m].
struct TranscriptDistribution {
  std::vector<double> halt;
  double tail = 0;
};

absl::StatusOr<TranscriptDistribution> HaltingDistribution(
    const DeterministicAdversary& adversary, int b, int horizon);

// sum_i P_i (P_i / Q_i)^(alpha - 1) over halting rounds i <= m plus the tail
// term, i.e. exp((alpha - 1) D_alpha) of the m-truncated game. Infinite when
// some Q outcome has zero mass under positive P mass.
absl::StatusOr<double> ExactRenyi(const DeterministicAdversary& adversary,
                                  double alpha, int horizon);

// ln max over outcomes (halting rounds and tail) of P / Q.
absl::StatusOr<double> ExactMaxDivergence(
    const DeterministicAdversary& adversary, int horizon);

struct BernoulliRenyiResult {
  double value = 0;  // p (p/q)^(a-1) + (1-p) ((1-p)/(1-q))^(a-1)
  double bound = 0;  // 1 + a (a - 1) eps^2
  bool holds = false;
};

// Requires e^eps-closeness of (p, q) and of (1 - p, 1 - q) in both
// directions, and alpha * eps <= 1/3.
absl::StatusOr<BernoulliRenyiResult> BernoulliRenyiCheck(double p, double q,
                                                         double epsilon,
                                                         double alpha);

// Exact divergences of the full game for general k against an adaptive
// adversary, by enumerating every transcript. Transcripts still running at
// length_cap are kept as their own outcomes, so the result is the exact
// divergence of the game observed up to length_cap rounds.
struct GameDivergence {
  std::vector<double> renyi_moments;  // one per requested alpha
  std::vector<double> renyi;          // D_alpha, one per requested alpha
  double max_log_ratio = 0;
  std::int64_t outcomes = 0;
  double capped_mass = 0;  // b = 0 probability of still running at the cap
};

absl::StatusOr<GameDivergence> EnumerateCoinGame(
    const QuerySource& adversary, double epsilon, int k, int length_cap,
    std::span<const double> alphas);

}  // namespace privsel

#endif  // PRIVSEL_COIN_GAME_H_
