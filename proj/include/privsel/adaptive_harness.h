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

// Adaptive data analysis simulation: an adversary issues linear queries that
// may depend on earlier answers, an answerer sees only the sample, and the
// harness scores every answer against both the sample and the population.

#ifndef PRIVSEL_ADAPTIVE_HARNESS_H_
#define PRIVSEL_ADAPTIVE_HARNESS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privsel/mwu.h"
#include "privsel/random_stream.h"

namespace privsel {

class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual absl::StatusOr<double> Answer(const LinearQuery& f) = 0;
  virtual std::int64_t update_rounds() const { return 0; }
};

// Built once per trial from the sample.
using AnswererFactory = std::function<absl::StatusOr<std::unique_ptr<Answerer>>(
    const Histogram& sample, RandomStream stream)>;

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual LinearQuery Next(RandomStream& stream) = 0;
  virtual void Observe(double /*answer*/) {}
};

// Built once per trial; the adversary knows the population and m.
using AdversaryFactory = std::function<std::unique_ptr<Adversary>(
    const Histogram& population, std::int64_t m)>;

// Answers with the sample mean.
AnswererFactory EmpiricalAnswerer();
AnswererFactory PrivateMwuAnswerer(const MwuConfig& config);

// The same m uniformly random [0, 1]-valued queries in every trial.
AdversaryFactory FixedQueriesAdversary(std::uint64_t seed);
// One random subset query asked m times.
AdversaryFactory RepeatedQueryAdversary(std::uint64_t seed);
// m - 1 random half-subset queries, then the subset of elements whose
// answers ran above the population, which correlates with the sample.
AdversaryFactory OverfittingAdversary();

absl::StatusOr<AdversaryFactory> AdversaryByName(const std::string& name,
                                                 std::uint64_t seed);

struct QueryRecord {
  std::int64_t trial = 0;
  std::int64_t index = 0;
  double answer = 0;
  double empirical = 0;
  double population = 0;
};

struct TrialRecord {
  double max_empirical_error = 0;
  double max_population_error = 0;
  double last_population_error = 0;  // error on the final query
  std::int64_t answered = 0;
  std::int64_t update_rounds = 0;
  bool halted = false;  // the answerer stopped before m queries
};

struct HarnessReport {
  std::vector<TrialRecord> trials;
  std::vector<QueryRecord> queries;  // filled when requested

  // Empirical q-quantile of a per-trial field.
  double Quantile(double q, double TrialRecord::* field) const;
};

struct HarnessOptions {
  std::int64_t n = 1000;
  std::int64_t m = 100;
  std::int64_t trials = 10;
  bool record_queries = false;
};

// Trial i draws from stream.Split(i), so trials are reproducible one by one.
absl::StatusOr<HarnessReport> RunAdaptiveHarness(
    const Histogram& population, const HarnessOptions& options,
    const AdversaryFactory& adversary, const AnswererFactory& answerer,
    const RandomStream& stream);

}  // namespace privsel

#endif  // PRIVSEL_ADAPTIVE_HARNESS_H_
