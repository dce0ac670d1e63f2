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

// Private multiplicative weights for linear queries over a finite universe.
// A public histogram h answers each query; the repetitive SVT checks the
// answer against the data and, when it is off by about alpha, a Laplace
// estimate is released and h is reweighted toward it.

#ifndef PRIVSEL_MWU_H_
#define PRIVSEL_MWU_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privsel/framework.h"
#include "privsel/random_stream.h"
#include "privsel/svt.h"

namespace privsel {

// Frozen constant C of the accuracy fixed point.
inline constexpr double kMwuConstant = 40.0;

// A linear query: f(x) in [0, 1] for every universe element x.
using LinearQuery = std::vector<double>;

// A probability vector over the universe {0, ..., size - 1}.
class Histogram {
 public:
  static Histogram Uniform(std::size_t size);
  // Normalizes nonnegative weights with a positive sum.
  static absl::StatusOr<Histogram> FromWeights(std::vector<double> weights);

  double Expectation(std::span<const double> f) const;
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t x) const { return p_[x]; }
  const std::vector<double>& probabilities() const { return p_; }

 private:
  explicit Histogram(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

// h'(x) proportional to h(x) exp(direction * eta * f(x)).
Histogram MwuUpdate(const Histogram& h, std::span<const double> f,
                    int direction, double eta);

// Empirical histogram of n i.i.d. draws from `population`.
Histogram SampleEmpirical(const Histogram& population, std::int64_t n,
                          RandomStream& stream);

struct MwuInputs {
  std::int64_t universe = 2;
  std::int64_t n = 1;
  std::int64_t m = 2;  // number of queries
  double epsilon = 1;
  double delta = 1e-6;
  double beta = 1e-2;
  double constant = kMwuConstant;
};

// Solves alpha = (C / (n eps)) (A / alpha + B) on (0, 1) by bisection to
// 1e-9, with A = sqrt(ln|X| ln(1/delta)) ln(m) and B = ln(1/beta).
absl::StatusOr<double> SolveAlpha(const MwuInputs& inputs);

// The n at which SolveAlpha returns `alpha`, rounded up.
absl::StatusOr<std::int64_t> SampleSizeFor(double alpha, MwuInputs inputs);

struct MwuConfig {
  MwuInputs inputs;
  double alpha = 0;
  std::int64_t update_budget = 0;  // k = ceil(ln|X| / alpha^2)
  double eta = 0;                  // alpha / 2
  int max_redraws = 3;
  std::int64_t svt_queries = 0;  // SVT stream length the recipe is sized for
  double svt_beta = 0;
  SvtConfig svt;
};

// Solves alpha and sizes the SVT: sensitivity 1/n, k = update_budget,
// 4m SVT queries (two per query plus retests), beta_svt = min(beta, 1/4m)/2.
absl::StatusOr<MwuConfig> MakeMwuConfig(const MwuInputs& inputs);

// One private MWU session over a fixed dataset, given as its empirical
// histogram. Owns its framework.
class PrivateMwu {
 public:
  struct Dataset {
    Histogram empirical;
  };

  static absl::StatusOr<PrivateMwu> Create(
      const MwuConfig& config, const Histogram& empirical, RandomStream stream,
      std::optional<Histogram> initial = std::nullopt);

  // Estimate of E_D[f] in [0, 1]. ResourceExhausted when the SVT budget ran
  // out during this call; FailedPrecondition on later calls.
  absl::StatusOr<double> Answer(const LinearQuery& f);

  bool halted() const { return halted_; }
  std::int64_t update_rounds() const { return update_rounds_; }
  std::int64_t releases() const { return releases_; }
  std::int64_t rejected_releases() const { return rejected_; }
  const Histogram& hypothesis() const { return h_; }
  const MwuConfig& config() const { return config_; }
  const Framework<Dataset>& framework() const { return *framework_; }
  const RepetitiveSvt<Dataset>& svt() const { return *svt_; }

 private:
  PrivateMwu(const MwuConfig& config, std::unique_ptr<Dataset> data,
             std::unique_ptr<Framework<Dataset>> framework, Histogram h);

  // Runs one SVT query on E_D[f] * sign - offset <~ threshold. Sets halted_
  // and returns nullopt when the SVT halts.
  absl::StatusOr<std::optional<Verdict>> Check(const LinearQuery& f, int sign,
                                               double offset, double threshold);

  MwuConfig config_;
  std::unique_ptr<Dataset> data_;
  std::unique_ptr<Framework<Dataset>> framework_;
  std::optional<RepetitiveSvt<Dataset>> svt_;
  Histogram h_;
  bool halted_ = false;
  std::int64_t update_rounds_ = 0;
  std::int64_t releases_ = 0;
  std::int64_t rejected_ = 0;
};

}  // namespace privsel

#endif  // PRIVSEL_MWU_H_
