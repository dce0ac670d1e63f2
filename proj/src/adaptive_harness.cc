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

#include "privsel/adaptive_harness.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace privsel {
namespace {

class EmpiricalMean : public Answerer {
 public:
  explicit EmpiricalMean(Histogram sample) : sample_(std::move(sample)) {}
  absl::StatusOr<double> Answer(const LinearQuery& f) override {
    return sample_.Expectation(f);
  }

 private:
  Histogram sample_;
};

class MwuAnswerer : public Answerer {
 public:
  explicit MwuAnswerer(PrivateMwu session) : session_(std::move(session)) {}
  absl::StatusOr<double> Answer(const LinearQuery& f) override {
    return session_.Answer(f);
  }
  std::int64_t update_rounds() const override {
    return session_.update_rounds();
  }

 private:
  PrivateMwu session_;
};

LinearQuery RandomQuery(std::size_t size, RandomStream& s) {
  LinearQuery f(size);
  for (double& v : f) v = s.Uniform();
  return f;
}

LinearQuery RandomSubset(std::size_t size, RandomStream& s) {
  LinearQuery f(size);
  for (double& v : f) v = s.Uniform() < 0.5 ? 1 : 0;
  return f;
}

class ListAdversary : public Adversary {
 public:
  explicit ListAdversary(std::vector<LinearQuery> queries)
      : queries_(std::move(queries)) {}
  LinearQuery Next(RandomStream&) override {
    return queries_[next_++ % queries_.size()];
  }

 private:
  std::vector<LinearQuery> queries_;
  std::size_t next_ = 0;
};

class Overfitter : public Adversary {
 public:
  Overfitter(const Histogram& population, std::int64_t m)
      : population_(population), m_(m), score_(population.size(), 0) {}

  LinearQuery Next(RandomStream& stream) override {
    ++issued_;
    if (issued_ < m_) {
      last_ = RandomSubset(population_.size(), stream);
      return last_;
    }
    // Elements that sat in subsets answered above the population mean.
    LinearQuery attack(population_.size());
    for (std::size_t x = 0; x < attack.size(); ++x) {
      attack[x] = score_[x] > 0 ? 1 : 0;
    }
    last_.clear();
    return attack;
  }

  void Observe(double answer) override {
    if (last_.empty()) return;
    const double excess = answer - population_.Expectation(last_);
    for (std::size_t x = 0; x < score_.size(); ++x) {
      score_[x] += excess * (last_[x] - 0.5);
    }
  }

 private:
  Histogram population_;
  std::int64_t m_;
  std::int64_t issued_ = 0;
  std::vector<double> score_;
  LinearQuery last_;
};

}  // namespace

AnswererFactory EmpiricalAnswerer() {
  return [](const Histogram& sample,
            RandomStream) -> absl::StatusOr<std::unique_ptr<Answerer>> {
    return std::make_unique<EmpiricalMean>(sample);
  };
}

AnswererFactory PrivateMwuAnswerer(const MwuConfig& config) {
  return [config](
             const Histogram& sample,
             RandomStream stream) -> absl::StatusOr<std::unique_ptr<Answerer>> {
    absl::StatusOr<PrivateMwu> session =
        PrivateMwu::Create(config, sample, std::move(stream));
    if (!session.ok()) return session.status();
    return std::make_unique<MwuAnswerer>(*std::move(session));
  };
}

AdversaryFactory FixedQueriesAdversary(std::uint64_t seed) {
  return [seed](const Histogram& population, std::int64_t m) {
    RandomStream s(seed, {0x51});
    std::vector<LinearQuery> queries;
    for (std::int64_t i = 0; i < m; ++i) {
      queries.push_back(RandomQuery(population.size(), s));
    }
    return std::make_unique<ListAdversary>(std::move(queries));
  };
}

AdversaryFactory RepeatedQueryAdversary(std::uint64_t seed) {
  return [seed](const Histogram& population, std::int64_t) {
    RandomStream s(seed, {0x52});
    return std::make_unique<ListAdversary>(
        std::vector<LinearQuery>{RandomSubset(population.size(), s)});
  };
}

AdversaryFactory OverfittingAdversary() {
  return [](const Histogram& population, std::int64_t m) {
    return std::make_unique<Overfitter>(population, m);
  };
}

absl::StatusOr<AdversaryFactory> AdversaryByName(const std::string& name,
                                                 std::uint64_t seed) {
  if (name == "fixed") return FixedQueriesAdversary(seed);
  if (name == "repeated") return RepeatedQueryAdversary(seed);
  if (name == "overfitting") return OverfittingAdversary();
  return absl::InvalidArgumentError(
      absl::StrCat("unknown adversary '", name,
                   "'; expected fixed, repeated or overfitting"));
}

double HarnessReport::Quantile(double q, double TrialRecord::* field) const {
  if (trials.empty()) return 0;
  std::vector<double> v;
  v.reserve(trials.size());
  for (const TrialRecord& t : trials) v.push_back(t.*field);
  std::sort(v.begin(), v.end());
  const auto i = static_cast<std::size_t>(
      std::ceil(std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, i == 0 ? 0 : i - 1)];
}

absl::StatusOr<HarnessReport> RunAdaptiveHarness(
    const Histogram& population, const HarnessOptions& options,
    const AdversaryFactory& adversary, const AnswererFactory& answerer,
    const RandomStream& stream) {
  if (options.n < 1 || options.m < 1 || options.trials < 0) {
    return absl::InvalidArgumentError("need n >= 1, m >= 1 and trials >= 0");
  }
  HarnessReport report;
  report.trials.reserve(options.trials);
  for (std::int64_t trial = 0; trial < options.trials; ++trial) {
    const RandomStream base = stream.Split(trial);
    RandomStream data_stream = base.Split(0);
    RandomStream query_stream = base.Split(1);
    const Histogram sample =
        SampleEmpirical(population, options.n, data_stream);
    absl::StatusOr<std::unique_ptr<Answerer>> a =
        answerer(sample, base.Split(2));
    if (!a.ok()) return a.status();
    std::unique_ptr<Adversary> adv = adversary(population, options.m);

    TrialRecord record;
    for (std::int64_t i = 0; i < options.m; ++i) {
      const LinearQuery f = adv->Next(query_stream);
      absl::StatusOr<double> answer = (*a)->Answer(f);
      if (!answer.ok()) {
        if (absl::IsResourceExhausted(answer.status()) ||
            absl::IsFailedPrecondition(answer.status())) {
          record.halted = true;
          break;
        }
        return answer.status();
      }
      adv->Observe(*answer);
      const double empirical = sample.Expectation(f);
      const double truth = population.Expectation(f);
      record.max_empirical_error =
          std::max(record.max_empirical_error, std::abs(*answer - empirical));
      record.last_population_error = std::abs(*answer - truth);
      record.max_population_error =
          std::max(record.max_population_error, record.last_population_error);
      ++record.answered;
      if (options.record_queries) {
        report.queries.push_back({trial, i, *answer, empirical, truth});
      }
    }
    record.update_rounds = (*a)->update_rounds();
    report.trials.push_back(record);
  }
  return report;
}

}  // namespace privsel
