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
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privsel/random_stream.h"
#include "stats_util.h"

namespace privsel {
namespace {

using ::privsel::testing::BinomialSigma;
using ::privsel::testing::ChiSquare;
using ::privsel::testing::ChiSquareCritical;
using ::privsel::testing::KsStatistic;
using ::privsel::testing::Trapezoid;

constexpr int kDraws = 1000000;

std::vector<double> LaplaceDraws(RandomStream stream, double scale, int n) {
  std::vector<double> out(n);
  for (double& v : out) v = *SampleLaplace(stream, scale);
  return out;
}

double Median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

TEST(RandomStreamTest, SameSeedAndPathGiveSameSequence) {
  RandomStream a(42, {1, 2});
  RandomStream b(42, {1, 2});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomStreamTest, SplitIgnoresParentConsumption) {
  RandomStream parent(7);
  RandomStream early = parent.Split(3);
  for (int i = 0; i < 100; ++i) parent();
  RandomStream late = parent.Split(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(early(), late());
  EXPECT_THAT(late.path(), ::testing::ElementsAre(3));
}

TEST(RandomStreamTest, DifferentPathsDiffer) {
  RandomStream a(1, {0, 1});
  RandomStream b(1, {1, 0});
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a() == b();
  EXPECT_EQ(equal, 0);
}

TEST(RandomStreamTest, SplitSubstreamsAreUncorrelated) {
  RandomStream root(2026);
  constexpr int kN = 200000;
  // Pearson correlation of paired uniforms; under independence it is roughly
  // normal with standard deviation 1 / sqrt(n).
  for (int pair = 0; pair < 5; ++pair) {
    RandomStream x = root.Split(pair);
    RandomStream y = root.Split(pair + 1);
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < kN; ++i) {
      const double u = x.Uniform();
      const double v = y.Uniform();
      sx += u;
      sy += v;
      sxx += u * u;
      syy += v * v;
      sxy += u * v;
    }
    const double cov = sxy / kN - (sx / kN) * (sy / kN);
    const double r = cov / std::sqrt((sxx / kN - sx * sx / kN / kN) *
                                     (syy / kN - sy * sy / kN / kN));
    EXPECT_LT(std::abs(r), 4.5 / std::sqrt(kN)) << "pair " << pair;
  }
}

TEST(RandomStreamTest, UniformRanges) {
  RandomStream s(5);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double w = s.UniformOpen();
    ASSERT_GT(w, 0.0);
    ASSERT_LT(w, 1.0);
  }
}

TEST(LaplaceTest, RejectsBadScale) {
  RandomStream s(1);
  EXPECT_EQ(SampleLaplace(s, 0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(SampleLaplace(s, -1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(LaplaceTest, MedianAndMeanAbsolute) {
  std::vector<double> v = LaplaceDraws(RandomStream(11), 1.0, kDraws);
  EXPECT_NEAR(Median(v), 0.0, 0.01);
  double abs_sum = 0;
  for (double x : v) abs_sum += std::abs(x);
  EXPECT_NEAR(abs_sum / kDraws, 1.0, 0.01);
}

TEST(LaplaceTest, LowerQuantileAtScaleTwo) {
  // Oracle: integrate the density exp(-|v|/2)/4 over [-40, -2 ln 2].
  const double oracle =
      Trapezoid([](double v) { return std::exp(-std::abs(v) / 2) / 4; }, -40,
                -2 * std::log(2.0), 400000);
  ASSERT_NEAR(oracle, 0.25, 1e-6);
  std::vector<double> v = LaplaceDraws(RandomStream(12), 2.0, kDraws);
  const double hits = std::count_if(
      v.begin(), v.end(), [](double x) { return x <= -2 * std::log(2.0); });
  EXPECT_NEAR(hits / kDraws, oracle, 0.01);
}

TEST(LaplaceTest, KolmogorovSmirnovAcrossScales) {
  for (double scale : {0.5, 1.0, 3.0}) {
    std::vector<double> v = LaplaceDraws(RandomStream(13, {1}), scale, kDraws);
    const double ks = KsStatistic(v, [scale](double x) {
      return x < 0 ? 0.5 * std::exp(x / scale) : 1 - 0.5 * std::exp(-x / scale);
    });
    EXPECT_LT(ks, 0.005) << "scale " << scale;
  }
}

TEST(TruncatedLaplaceTest, RejectsBadParams) {
  EXPECT_FALSE(TruncatedLaplaceParams::Create(0, 0.5).ok());
  EXPECT_FALSE(TruncatedLaplaceParams::Create(1, 0).ok());
  EXPECT_FALSE(TruncatedLaplaceParams::Create(1, 1).ok());
  EXPECT_FALSE(TruncatedLaplaceParams::Create(-1, 0.5).ok());
}

TEST(TruncatedLaplaceTest, RadiusMatchesDefinition) {
  auto params = TruncatedLaplaceParams::Create(0.5, 1e-4);
  ASSERT_TRUE(params.ok());
  EXPECT_DOUBLE_EQ(params->radius(), std::log(1e4) / 0.5);
}

TEST(TruncatedLaplaceTest, SupportMedianAndMassOnUnitInterval) {
  auto params = TruncatedLaplaceParams::Create(1.0, std::exp(-3.0));
  ASSERT_TRUE(params.ok());
  RandomStream s(21);
  std::vector<double> v(kDraws);
  for (double& x : v) x = SampleTruncatedLaplace(s, *params);
  EXPECT_EQ(std::count_if(v.begin(), v.end(),
                          [](double x) { return x < -3 || x > 3; }),
            0);
  EXPECT_NEAR(Median(v), 0.0, 0.01);

  // Oracle: trapezoid normalization of exp(-|v|) on [-3, 3].
  auto density = [](double x) { return std::exp(-std::abs(x)); };
  const double z =
      Trapezoid(density, -3, 0, 200000) + Trapezoid(density, 0, 3, 200000);
  const double oracle = Trapezoid(density, 0, 1, 200000) / z;
  const double hits = std::count_if(v.begin(), v.end(),
                                    [](double x) { return x >= 0 && x <= 1; });
  EXPECT_NEAR(hits / kDraws, oracle, 0.01);
}

TEST(TruncatedLaplaceTest, KolmogorovSmirnovAcrossParams) {
  struct Setting {
    double epsilon;
    double delta;
  };
  for (Setting setting :
       {Setting{1.0, std::exp(-3.0)}, Setting{0.2, 1e-6}, Setting{5.0, 0.3}}) {
    auto params =
        TruncatedLaplaceParams::Create(setting.epsilon, setting.delta);
    ASSERT_TRUE(params.ok());
    RandomStream s(22, {static_cast<std::uint64_t>(setting.epsilon * 10)});
    std::vector<double> v(kDraws);
    for (double& x : v) x = SampleTruncatedLaplace(s, *params);
    const double eps = setting.epsilon;
    const double r = params->radius();
    const double mass = 1 - std::exp(-eps * r);
    const double ks = KsStatistic(v, [eps, r, mass](double x) {
      x = std::clamp(x, -r, r);
      const double half = (1 - std::exp(-eps * std::abs(x))) / mass / 2;
      return x < 0 ? 0.5 - half : 0.5 + half;
    });
    EXPECT_LT(ks, 0.005) << "epsilon " << eps;
  }
}

TEST(PassProbabilityTest, RejectsNonPositiveGamma) {
  RandomStream s(1);
  EXPECT_FALSE(SamplePassProbability(s, 0).ok());
  EXPECT_FALSE(SamplePassProbability(s, -2).ok());
}

TEST(PassProbabilityTest, PointProbabilities) {
  struct Case {
    double gamma;
    double x;
  };
  for (Case c : {Case{2.0, 0.5}, Case{0.5, 0.25}}) {
    RandomStream s(31, {static_cast<std::uint64_t>(c.gamma * 4)});
    int below = 0;
    for (int i = 0; i < kDraws; ++i)
      below += *SamplePassProbability(s, c.gamma) <= c.x;
    EXPECT_NEAR(static_cast<double>(below) / kDraws, std::pow(c.x, c.gamma),
                0.005);
  }
}

TEST(PassProbabilityTest, KolmogorovSmirnov) {
  for (double gamma : {0.5, 1.0, 2.0}) {
    RandomStream s(32, {static_cast<std::uint64_t>(gamma * 4)});
    std::vector<double> v(kDraws);
    for (double& x : v) x = *SamplePassProbability(s, gamma);
    const double ks = KsStatistic(v, [gamma](double x) {
      return std::pow(std::clamp(x, 0.0, 1.0), gamma);
    });
    EXPECT_LT(ks, 0.005) << "gamma " << gamma;
  }
}

TEST(BernoulliTest, Extremes) {
  RandomStream s(41);
  for (int i = 0; i < 100000; ++i) {
    ASSERT_FALSE(*SampleBernoulli(s, 0.0));
    ASSERT_TRUE(*SampleBernoulli(s, 1.0));
  }
}

TEST(BernoulliTest, Mean) {
  RandomStream s(42);
  int ones = 0;
  for (int i = 0; i < kDraws; ++i) ones += *SampleBernoulli(s, 0.3);
  EXPECT_NEAR(static_cast<double>(ones) / kDraws, 0.3, 0.002);
}

TEST(BernoulliTest, RejectsOutOfRange) {
  RandomStream s(43);
  EXPECT_FALSE(SampleBernoulli(s, -0.1).ok());
  EXPECT_FALSE(SampleBernoulli(s, 1.1).ok());
}

TEST(ExponentialMechanismTest, RejectsEmptyScores) {
  RandomStream s(51);
  EXPECT_FALSE(ExponentialMechanism(s, {}, 1.0, 1.0).ok());
  const std::vector<double> scores = {1.0};
  EXPECT_FALSE(ExponentialMechanism(s, scores, 0.0, 1.0).ok());
  EXPECT_FALSE(ExponentialMechanism(s, scores, 1.0, 0.0).ok());
}

TEST(ExponentialMechanismTest, EqualScoresAreUniform) {
  RandomStream s(52);
  const std::vector<double> scores(8, 3.5);
  std::vector<std::int64_t> counts(8, 0);
  constexpr int kN = 400000;
  for (int i = 0; i < kN; ++i) ++counts[*ExponentialMechanism(s, scores, 1, 1)];
  const std::vector<double> expected(8, kN / 8.0);
  EXPECT_LT(ChiSquare(counts, expected), ChiSquareCritical(7, 1e-3));
}

TEST(ExponentialMechanismTest, WeightRatio) {
  const double epsilon = 0.7, sensitivity = 1.5;
  const std::vector<double> scores = {
      0, 2 * sensitivity / epsilon * std::log(4.0)};
  // Hand oracle: exp(eps * s / (2 sens)) at s = 2 sens ln 4 / eps is 4.
  RandomStream s(53);
  int ones = 0;
  constexpr int kN = 1000000;
  for (int i = 0; i < kN; ++i) {
    ones += *ExponentialMechanism(s, scores, epsilon, sensitivity) == 1;
  }
  const double ratio = static_cast<double>(ones) / (kN - ones);
  EXPECT_NEAR(ratio, 4.0, 0.08);
}

TEST(ExponentialMechanismTest, LargeEpsilonPicksArgmax) {
  RandomStream s(54);
  const std::vector<double> scores = {0.1, 0.9, 0.5, 0.2};
  for (int i = 0; i < 10000; ++i) {
    ASSERT_EQ(*ExponentialMechanism(s, scores, 100, 1), 1u);
  }
}

TEST(ExponentialMechanismTest, ExtremeScoresStayFinite) {
  RandomStream s(55);
  const std::vector<double> scores = {1e6, -1e6, 1e6 - 1};
  for (int i = 0; i < 1000; ++i) {
    ASSERT_NE(*ExponentialMechanism(s, scores, 1, 1), 1u);
  }
}

}  // namespace
}  // namespace privsel
