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
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "gtest/gtest.h"
#include "privsel/better_than_median.h"
#include "privsel/framework.h"
#include "privsel/noise.h"
#include "privsel/query_release.h"
#include "privsel/random_stream.h"
#include "privsel/stable_selection.h"
#include "privsel/top_k.h"
#include "stats_util.h"

namespace privsel {
namespace {

using ::privsel::testing::BinomialSigma;
using ::privsel::testing::ChiSquare;
using ::privsel::testing::ChiSquareCritical;

// Scores are stored directly; f_i(D) = D.values[i].
struct Table {
  std::vector<double> values;
};

ScoreFamily<Table> Columns(std::size_t m) {
  ScoreFamily<Table> family;
  for (std::size_t i = 0; i < m; ++i) {
    family.evaluators.push_back([i](const Table& t) { return t.values[i]; });
  }
  return family;
}

using UniformScore = Mechanism<Table, ScoredCandidate<int>>;

UniformScore UniformBase(double epsilon) {
  return {[](const Table&, RandomStream& s) {
            return ScoredCandidate<int>{0, s.Uniform()};
          },
          epsilon, 1e-7};
}

// Independent statement of the oracle-call budget.
std::int64_t BudgetOracle(double alpha, double beta) {
  if (alpha == 1) {
    std::int64_t t = 1;
    while (t * beta < 2 - 1e-12) ++t;
    return t;
  }
  const double x = 5 * std::exp(std::log(2 / beta) / alpha) * -std::log(beta);
  return static_cast<std::int64_t>(std::ceil(x));
}

TEST(BtmConfigTest, BudgetMatchesBothBranchesOnGrid) {
  const double alphas[] = {0.5, 1, 1.5, 2, 3};
  const double betas[] = {0.3, 0.1, 0.05, 0.01};
  for (double a : alphas) {
    for (double b : betas) {
      absl::StatusOr<BtmConfig> config = BtmConfig::Create(a, b);
      ASSERT_TRUE(config.ok());
      EXPECT_EQ(config->oracle_calls(), BudgetOracle(a, b)) << a << " " << b;
    }
  }
}

TEST(BtmConfigTest, WorkedBudgets) {
  EXPECT_EQ(BtmConfig::Create(1, 0.01)->oracle_calls(), 200);
  EXPECT_EQ(BtmConfig::Create(2, 0.5)->oracle_calls(), 7);
  EXPECT_EQ(BtmConfig::Create(2, 0.05)->oracle_calls(), 95);
}

TEST(BtmConfigTest, RejectsBadParameters) {
  EXPECT_EQ(BtmConfig::Create(0, 0.1).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BtmConfig::Create(1, 0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(BtmConfig::Create(1, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(BetterThanMedianTest, RejectsGammaMismatchAndLargeEpsilon) {
  const Table t;
  auto fw = Framework<Table>::Create(2, t, RandomStream(1));
  ASSERT_TRUE(fw.ok());
  auto config = BtmConfig::Create(1, 0.1);
  EXPECT_EQ(BetterThanMedian(UniformBase(0.1), *config, *fw).status().code(),
            absl::StatusCode::kFailedPrecondition);
  auto fw1 = Framework<Table>::Create(1, t, RandomStream(1));
  EXPECT_EQ(BetterThanMedian(UniformBase(1.0), *config, *fw1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

class BtmFailureRateTest
    : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(BtmFailureRateTest, BelowMedianRateWithinBeta) {
  const auto [alpha, beta] = GetParam();
  const Table t;
  const auto config = *BtmConfig::Create(alpha, beta);
  const int trials = 10000;
  int failures = 0;
  for (int i = 0; i < trials; ++i) {
    auto fw = Framework<Table>::Create(alpha, t,
                                       RandomStream(7, {1, std::uint64_t(i)}));
    auto out = BetterThanMedian(UniformBase(0.1), config, *fw);
    ASSERT_TRUE(out.ok());
    if (!out->has_value() || (*out)->score < 0.5) ++failures;
  }
  const double rate = static_cast<double>(failures) / trials;
  EXPECT_LE(rate, beta + 3 * BinomialSigma(beta, trials));
}

INSTANTIATE_TEST_SUITE_P(Grid, BtmFailureRateTest,
                         ::testing::Values(std::pair{1.0, 0.1},
                                           std::pair{2.0, 0.05}));

TEST(BetterThanMedianTest, ConstantScoreNeverBelowMedian) {
  const Table t;
  const auto config = *BtmConfig::Create(1, 0.1);
  UniformScore constant{
      [](const Table&, RandomStream&) { return ScoredCandidate<int>{0, 3.0}; },
      0.1, 0};
  for (int i = 0; i < 500; ++i) {
    auto fw =
        Framework<Table>::Create(1, t, RandomStream(8, {std::uint64_t(i)}));
    auto out = BetterThanMedian(constant, config, *fw);
    ASSERT_TRUE(out.ok());
    if (out->has_value()) {
      EXPECT_GE((*out)->score, 3.0);
    }
  }
}

TEST(BetterThanMedianTest, AccountantMatchesClosedForm) {
  const Table t;
  for (double alpha : {1.0, 2.0, 0.5}) {
    const auto config = *BtmConfig::Create(alpha, 0.05);
    auto fw = Framework<Table>::Create(alpha, t, RandomStream(9));
    ASSERT_TRUE(BetterThanMedian(UniformBase(0.2), config, *fw).ok());
    const PrivacyCost cost = fw->PureCost();
    EXPECT_DOUBLE_EQ(cost.epsilon, (2 + alpha) * 0.2);
    EXPECT_DOUBLE_EQ(cost.delta, config.oracle_calls() * 1e-7);
  }
}

TEST(GapTest, WorkedValues) {
  const std::vector<double> scores = {5, 4, 3, 2};
  const std::vector<std::size_t> top = {0, 1};
  const std::vector<std::size_t> mixed = {0, 3};
  EXPECT_EQ(*Gap(top, scores), -1);
  EXPECT_EQ(*Gap(mixed, scores), 2);
  const std::vector<double> flat = {1, 1, 1};
  const std::vector<std::size_t> one = {2};
  EXPECT_EQ(*Gap(one, flat), 0);
}

TEST(GapTest, RejectsImproperSets) {
  const std::vector<double> scores = {5, 4, 3};
  EXPECT_FALSE(Gap(std::vector<std::size_t>{}, scores).ok());
  EXPECT_FALSE(Gap(std::vector<std::size_t>{0, 1, 2}, scores).ok());
  EXPECT_FALSE(Gap(std::vector<std::size_t>{0, 0}, scores).ok());
  EXPECT_FALSE(Gap(std::vector<std::size_t>{5}, scores).ok());
}

TEST(GapTest, TranslationInvariantAndComplementAntisymmetric) {
  RandomStream s(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 9;
    std::vector<double> scores(m);
    for (double& x : scores) x = 10 * s.Uniform() - 5;
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < m; ++i)
      (s.Uniform() < 0.5 ? in : out).push_back(i);
    if (in.empty() || out.empty()) continue;
    const double g = *Gap(in, scores);
    const double shift = 100 * s.Uniform() - 50;
    std::vector<double> shifted = scores, negated = scores;
    for (double& x : shifted) x += shift;
    for (double& x : negated) x = -x;
    EXPECT_NEAR(*Gap(in, shifted), g, 1e-9);
    EXPECT_NEAR(*Gap(out, negated), g, 1e-12);
  }
}

TEST(PeelingSamplerTest, OrderedPairsFollowSequentialLaw) {
  const std::vector<double> scores = {0, 1, 2, 4};
  const double eps = 0.8;
  const PeelingSampler sampler(scores, eps, 1.0);
  std::vector<double> w;
  for (double x : scores) w.push_back(std::exp(eps * x / 2));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> expected;
  std::map<std::pair<std::size_t, std::size_t>, int> cell;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      cell[{i, j}] = static_cast<int>(expected.size());
      expected.push_back(w[i] / total * w[j] / (total - w[i]));
    }
  }
  const int n = 200000;
  std::vector<std::int64_t> observed(expected.size(), 0);
  RandomStream s(12);
  for (int t = 0; t < n; ++t) {
    const auto pick = sampler.Sample(s, 2);
    ASSERT_NE(pick[0], pick[1]);
    ++observed[cell[{pick[0], pick[1]}]];
  }
  for (double& e : expected) e *= n;
  EXPECT_LT(ChiSquare(observed, expected), ChiSquareCritical(11, 1e-3));
}

TEST(PeelingSamplerTest, SurvivesUnderflow) {
  const std::vector<double> scores = {0, -1e6, -2e6, -3e6};
  const PeelingSampler sampler(scores, 1.0, 1.0);
  RandomStream s(13);
  auto pick = sampler.Sample(s, 4);
  std::sort(pick.begin(), pick.end());
  EXPECT_EQ(pick, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(TopKTest, RejectsBadParameters) {
  const Table t{{1, 2, 3}};
  const auto family = Columns(3);
  TopKParams p;
  p.k = 3;
  EXPECT_EQ(TopKSelect(family, p, t, RandomStream(1)).status().code(),
            absl::StatusCode::kInvalidArgument);
  p.k = 1;
  p.delta = 0;
  EXPECT_EQ(TopKSelect(family, p, t, RandomStream(1)).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(TopKTest, DominatingCandidateSelected) {
  const std::size_t m = 16;
  const int k = 2;
  TopKParams p{k, 1.0, 0.01, 0.01};
  const double eps_em = p.epsilon / (40 * std::sqrt(k * std::log(1 / p.delta)));
  const double lead =
      10 * (std::sqrt(k * std::log(1 / p.delta)) / eps_em) * std::log(m);
  Table t{std::vector<double>(m, 0)};
  t.values[5] = lead;
  const auto family = Columns(m);
  const int trials = 400;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    auto r = TopKSelect(family, p, t, RandomStream(14, {std::uint64_t(i)}));
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r->selected.size(), static_cast<std::size_t>(k));
    if (std::count(r->selected.begin(), r->selected.end(), 5)) ++hits;
  }
  EXPECT_GE(hits,
            trials * (1 - p.beta) - 3 * trials * BinomialSigma(p.beta, trials));
}

TEST(TopKTest, EqualScoresGiveZeroGapAndNonnegativeCertificate) {
  const std::size_t m = 8;
  Table t{std::vector<double>(m, 2.5)};
  const auto family = Columns(m);
  TopKParams p{3, 0.5, 0.01, 0.01};
  int negative = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    auto r = TopKSelect(family, p, t, RandomStream(15, {std::uint64_t(i)}));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(*Gap(r->selected, t.values), 0);
    if (r->certificate < 0) ++negative;
  }
  EXPECT_LE(negative, 3);
}

TEST(TopKTest, AccountantMatchesClosedForm) {
  const std::size_t m = 10;
  Table t{std::vector<double>(m)};
  std::iota(t.values.begin(), t.values.end(), 0.0);
  const auto family = Columns(m);
  TopKParams p{2, 0.6, 0.01, 0.05};
  auto r = TopKSelect(family, p, t, RandomStream(16));
  ASSERT_TRUE(r.ok());
  const double calls = std::ceil(20 / p.delta);
  EXPECT_NEAR(r->cost.epsilon, 3 * p.epsilon / 3, 1e-15);
  EXPECT_NEAR(r->cost.delta, calls * p.delta * p.delta / 10, 1e-15);
  EXPECT_FALSE(r->corrected);
}

TEST(TopKTest, CorrectionPathMeetsBoundAlways) {
  const std::size_t m = 20;
  Table t{std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) t.values[i] = 40.0 * i;
  const auto family = Columns(m);
  TopKParams p{3, 1.0, 0.01, 1e-4};
  const double bound =
      TopKGapBound(p.gap_constant, p.k, m, p.epsilon, p.delta, p.delta / 10);
  for (int i = 0; i < 50; ++i) {
    auto r = TopKSelect(family, p, t, RandomStream(17, {std::uint64_t(i)}));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r->internal_delta, p.delta / 10);
    EXPECT_EQ(r->internal_beta, p.delta / 10);
    EXPECT_LE(*Gap(r->selected, t.values), bound);
    const double calls = std::ceil(20 / (p.delta / 10));
    EXPECT_NEAR(r->cost.delta,
                calls * std::pow(p.delta / 10, 2) / 10 + p.delta - p.delta / 10,
                1e-15);
  }
}

TEST(TopKTest, CorrectionReplacesEmptyRunWithExactTopK) {
  const std::vector<double> scores = {3, 9, 1, 7, 5};
  EXPECT_EQ(internal::ExactTopK(scores, 2), (std::vector<std::size_t>{1, 3}));
}

// Reduced-scale percentile check; see README for the full-scale bench.
TEST(TopKTest, GapPercentileWithinFrozenBound) {
  const std::size_t m = 64;
  const int k = 4;
  Table t{std::vector<double>(m)};
  // Spacing 10 gave the largest gap-to-bound ratio in calibration.
  for (std::size_t i = 0; i < m; ++i) t.values[i] = 10.0 * i;
  const auto family = Columns(m);
  TopKParams p{k, 1.0, 1e-3, 1e-3};
  const int trials = 500;
  std::vector<double> gaps;
  for (int i = 0; i < trials; ++i) {
    auto r = TopKSelect(family, p, t, RandomStream(18, {std::uint64_t(i)}));
    ASSERT_TRUE(r.ok());
    gaps.push_back(*Gap(r->selected, t.values));
  }
  std::sort(gaps.begin(), gaps.end());
  const double q999 = gaps[static_cast<std::size_t>(0.999 * (trials - 1))];
  EXPECT_LE(q999,
            TopKGapBound(kTopKGapConstant, k, m, p.epsilon, p.delta, p.beta));
}

TEST(ChoosingTest, MissingCertificateRejected) {
  Table t{{1, 2}};
  auto family = Columns(2);
  auto fw = Framework<Table>::Create(1, t, RandomStream(1));
  EXPECT_EQ(ChoosingMechanism(family, {}, *fw).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(ChoosingTest, SingleFunctionAlwaysChosen) {
  Table t{{4}};
  auto family = Columns(1);
  family.total_sensitivity = 1;
  for (int i = 0; i < 200; ++i) {
    auto fw =
        Framework<Table>::Create(1, t, RandomStream(19, {std::uint64_t(i)}));
    auto c = ChoosingMechanism(family, {0.5, 1e-6, 0.05}, *fw);
    ASSERT_TRUE(c.ok());
    if (c->index.has_value()) {
      EXPECT_EQ(*c->index, 0u);
    }
  }
}

TEST(ChoosingTest, WidelySeparatedPairAlwaysWinsWhenRun) {
  const ChoiceParams params{0.5, 1e-6, 0.05};
  const double radius =
      std::log(5 * 1 / (params.delta * params.beta)) / params.epsilon;
  Table t{{0, 3 * 2 * radius}};
  auto family = Columns(2);
  family.total_sensitivity = 1;
  const int trials = 10000;
  // With every coin firing, the noise can never swap the two.
  for (int i = 0; i < trials; ++i) {
    auto fw = Framework<Table>::CreateWithPassProbability(
        1, 1.0, t, RandomStream(20, {std::uint64_t(i)}));
    auto c = ChoosingMechanism(family, params, *fw);
    ASSERT_TRUE(c.ok());
    ASSERT_EQ(c->index, 1u);
  }
  // With p drawn uniformly, index 0 wins only when mechanism 1 never fired
  // and mechanism 0 did: probability tau / ((tau + 1)(2 tau + 1)).
  const double tau = ChoosingRepetitions(params.beta);
  const double p_wrong = tau / ((tau + 1) * (2 * tau + 1));
  int wrong = 0;
  for (int i = 0; i < trials; ++i) {
    auto fw =
        Framework<Table>::Create(1, t, RandomStream(31, {std::uint64_t(i)}));
    auto c = ChoosingMechanism(family, params, *fw);
    ASSERT_TRUE(c.ok());
    if (c->index == 0u) ++wrong;
  }
  EXPECT_NEAR(wrong, trials * p_wrong,
              4 * trials * BinomialSigma(p_wrong, trials));
}

TEST(ChoosingTest, UtilityLossWithinRadius) {
  const ChoiceParams params{0.5, 1e-6, 0.05};
  const std::size_t m = 8;
  auto family = Columns(m);
  family.total_sensitivity = 2;
  const double radius =
      std::log(5 * 2 / (params.delta * params.beta)) / params.epsilon;
  RandomStream data(21);
  int failures = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    Table t{std::vector<double>(m)};
    for (double& x : t.values) x = 200 * data.Uniform();
    const double best = *std::max_element(t.values.begin(), t.values.end());
    auto fw =
        Framework<Table>::Create(1, t, RandomStream(22, {std::uint64_t(i)}));
    auto c = ChoosingMechanism(family, params, *fw);
    ASSERT_TRUE(c.ok());
    if (!c->index.has_value() || t.values[*c->index] < best - 2 * radius) {
      ++failures;
    }
  }
  EXPECT_LE(failures, trials * params.beta +
                          3 * trials * BinomialSigma(params.beta, trials));
}

TEST(ChoosingTest, AccountantAfterOneCall) {
  Table t{{1, 2, 3}};
  auto family = Columns(3);
  family.total_sensitivity = 1;
  const ChoiceParams params{0.3, 1e-5, 0.1};
  auto fw = Framework<Table>::Create(1, t, RandomStream(23));
  auto c = ChoosingMechanism(family, params, *fw);
  ASSERT_TRUE(c.ok());
  EXPECT_DOUBLE_EQ(c->cost.epsilon, 3 * params.epsilon);
  EXPECT_DOUBLE_EQ(c->cost.delta, ChoosingRepetitions(params.beta) *
                                      params.delta * params.beta / 5);
  EXPECT_LE(c->cost.delta, params.delta);
}

TEST(StableSelectTest, ReferenceOrderStatistic) {
  const std::vector<double> scores = {9, 7, 7, 3, 1};
  EXPECT_EQ(*KthGapReference(scores, 2), 7);
  EXPECT_FALSE(KthGapReference(scores, 5).ok());
}

TEST(StableSelectTest, RejectsBadParameters) {
  Table t{{1, 2, 3}};
  auto family = Columns(3);
  auto fw = Framework<Table>::Create(1, t, RandomStream(1));
  EXPECT_EQ(StableSelect(family, 3, {}, *fw).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(StableSelect(family, 1, {0.5, 0, 0.1}, *fw).status().code(),
            absl::StatusCode::kInvalidArgument);
  auto fw2 = Framework<Table>::Create(2, t, RandomStream(1));
  EXPECT_EQ(StableSelect(family, 1, {}, *fw2).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(StableSelectTest, FarLeaderSelected) {
  const std::size_t m = 32;
  const int k = 2;
  const ChoiceParams params{0.6, 1e-6, 0.05};
  const double radius =
      std::log(10 * k / (params.beta * params.delta)) / (params.epsilon / 3);
  Table t{std::vector<double>(m, 0)};
  for (std::size_t i = 0; i < m; ++i) t.values[i] = static_cast<double>(i % 5);
  t.values[17] = 4 + 6 * radius;
  auto family = Columns(m);
  const int trials = 10000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    auto fw =
        Framework<Table>::Create(1, t, RandomStream(24, {std::uint64_t(i)}));
    auto c = StableSelect(family, k, params, *fw);
    ASSERT_TRUE(c.ok());
    if (c->index == 17u) ++hits;
  }
  EXPECT_GE(hits, trials * (1 - params.beta) -
                      3 * trials * BinomialSigma(params.beta, trials));
}

TEST(StableSelectTest, AccountantMatchesClosedForm) {
  Table t{{1, 1, 1, 1}};
  auto family = Columns(4);
  const ChoiceParams params{0.9, 1e-4, 0.1};
  auto fw = Framework<Table>::Create(1, t, RandomStream(25));
  auto c = StableSelect(family, 1, params, *fw);
  ASSERT_TRUE(c.ok());
  EXPECT_NEAR(c->cost.epsilon, params.epsilon, 1e-15);
  EXPECT_DOUBLE_EQ(c->cost.delta, StableRepetitions(params.beta) * 2 *
                                      params.delta * params.beta / 5);
  EXPECT_LE(c->cost.delta, params.delta);
}

QueryList<Table> Coordinates(std::size_t k) {
  QueryList<Table> q;
  for (std::size_t j = 0; j < k; ++j) {
    q.push_back([j](const Table& t) { return t.values[j]; });
  }
  return q;
}

TEST(QueryReleaseTest, BaselineCertificateIsUpperBound) {
  const Table t{{3, -1}};
  const auto queries = Coordinates(1);
  auto base = IndependentNoiseReleaseBase(queries, 0.2, 1e-4);
  ASSERT_TRUE(base.ok());
  RandomStream s(26);
  double worst_slack = 1e300;
  for (int i = 0; i < 1000000; ++i) {
    const ReleaseCandidate c = base->run(t, s);
    ASSERT_TRUE(c.certificate.has_value());
    worst_slack =
        std::min(worst_slack, *c.certificate - std::abs(c.answers[0] - 3));
  }
  EXPECT_GE(worst_slack, 0);
}

TEST(QueryReleaseTest, RejectsMissingCertificate) {
  const Table t{{1, 2}};
  const auto queries = Coordinates(2);
  Mechanism<Table, ReleaseCandidate> bad{[](const Table& d, RandomStream&) {
                                           return ReleaseCandidate{
                                               d.values, std::nullopt};
                                         },
                                         0.1, 1e-5};
  QueryReleaseParams params{0.3, 0.01};
  EXPECT_EQ(QueryReleaseAmplified(bad, queries, params, t, RandomStream(27))
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(QueryReleaseTest, RejectsOverBudgetBase) {
  const Table t{{1, 2}};
  const auto queries = Coordinates(2);
  auto base = IndependentNoiseReleaseBase(queries, 0.2, 1e-5);
  QueryReleaseParams params{0.3, 0.01};
  EXPECT_EQ(QueryReleaseAmplified(*base, queries, params, t, RandomStream(28))
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(QueryReleaseTest, HopelessBaseFallsBackToExactAnswers) {
  const Table t{{1, 2, 3}};
  const auto queries = Coordinates(3);
  Mechanism<Table, ReleaseCandidate> wild{[](const Table&, RandomStream&) {
                                            return ReleaseCandidate{
                                                {1e9, 1e9, 1e9}, 2e9};
                                          },
                                          0.1, 1e-5};
  QueryReleaseParams params{0.3, 0.01};
  for (int i = 0; i < 20; ++i) {
    auto r = QueryReleaseAmplified(wild, queries, params, t,
                                   RandomStream(29, {std::uint64_t(i)}));
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r->fallback);
    EXPECT_EQ(r->answers, t.values);
  }
}

TEST(QueryReleaseTest, FallbackRareAndAnswersWithinThreshold) {
  const double eps = 0.9, delta = 0.05;
  const Table t{{10, 20, 30, 40}};
  const auto queries = Coordinates(4);
  auto base = IndependentNoiseReleaseBase(queries, eps / 3, delta * delta / 10);
  ASSERT_TRUE(base.ok());
  const QueryReleaseParams params{eps, delta};
  const double threshold =
      QueryReleaseThreshold(params.constant, 4, eps, delta);
  const int trials = 100000;
  int fallbacks = 0;
  for (int i = 0; i < trials; ++i) {
    auto r = QueryReleaseAmplified(*base, queries, params, t,
                                   RandomStream(30, {std::uint64_t(i)}));
    ASSERT_TRUE(r.ok());
    if (r->fallback) ++fallbacks;
    for (std::size_t j = 0; j < 4; ++j) {
      ASSERT_LE(std::abs(r->answers[j] - t.values[j]), threshold);
    }
    if (i == 0) {
      EXPECT_NEAR(r->cost.epsilon, eps, 1e-15);
      EXPECT_NEAR(r->cost.delta, 400 * delta * delta / 10, 1e-15);
    }
  }
  EXPECT_LE(fallbacks, trials * delta / 5);
}

}  // namespace
}  // namespace privsel
