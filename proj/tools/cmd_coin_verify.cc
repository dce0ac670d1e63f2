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

// coin-verify: exact Renyi and max divergence of the coin game against the
// closed-form bounds, for schedules read from a file or drawn at random.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "commands.h"

namespace privsel::cli {

absl::StatusOr<std::vector<ParsedSchedule>> ParseSchedules(
    absl::string_view text) {
  std::vector<ParsedSchedule> schedules(1);
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (const std::size_t hash = line.find('#'); hash != line.npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) {
      if (!schedules.back().pairs.empty()) schedules.emplace_back();
      continue;
    }
    std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    QueryPair pair;
    if (fields.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(fields[0]), &pair.p) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(fields[1]), &pair.q)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": expected \"p, q\", got \"", line, "\""));
    }
    schedules.back().pairs.push_back(pair);
    schedules.back().lines.push_back(line_number);
  }
  if (schedules.back().pairs.empty()) schedules.pop_back();
  if (schedules.empty()) {
    return absl::InvalidArgumentError("schedule file holds no pairs");
  }
  return schedules;
}

namespace {

absl::StatusOr<std::vector<ParsedSchedule>> ReadScheduleFile(
    const std::string& path, double epsilon) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream text;
  text << in.rdbuf();
  absl::StatusOr<std::vector<ParsedSchedule>> schedules =
      ParseSchedules(text.str());
  if (!schedules.ok()) {
    return absl::Status(schedules.status().code(),
                        absl::StrCat(path, ": ", schedules.status().message()));
  }
  for (const ParsedSchedule& s : *schedules) {
    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
      if (absl::Status v = ValidatePair(s.pairs[i], epsilon); !v.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": line ", s.lines[i], ": ", v.message()));
      }
    }
  }
  return schedules;
}

}  // namespace

absl::StatusOr<CommandResult> RunCoinVerify(const ExperimentConfig& config) {
  absl::StatusOr<Params> params =
      Params::Create(config.params, {{"epsilon", ParamType::kReal, 0.2},
                                     {"schedule_file", ParamType::kString, {}},
                                     {"max_length", ParamType::kInt, 8},
                                     {"alphas", ParamType::kRealList, {}}});
  if (!params.ok()) return params.status();
  const double epsilon = params->Real("epsilon");
  if (!(epsilon > 0 && epsilon < 1)) {
    return absl::InvalidArgumentError("epsilon must lie in (0, 1)");
  }
  const std::int64_t max_length = params->Int("max_length");
  if (max_length < 1) return absl::InvalidArgumentError("max_length < 1");
  const std::vector<double> alphas =
      params->Has("alphas") ? params->Reals("alphas")
                            : std::vector<double>{1.5, 2, 1 / (3 * epsilon)};

  std::vector<std::vector<QueryPair>> schedules;
  if (params->Has("schedule_file")) {
    absl::StatusOr<std::vector<ParsedSchedule>> parsed =
        ReadScheduleFile(params->String("schedule_file"), epsilon);
    if (!parsed.ok()) return parsed.status();
    for (ParsedSchedule& s : *parsed) schedules.push_back(std::move(s.pairs));
  } else {
    const std::int64_t count = TrialsOr(config, 1000);
    const RandomStream root(config.seed);
    for (std::int64_t t = 0; t < count; ++t) {
      RandomStream s = root.Split(t);
      const auto length =
          1 + static_cast<std::int64_t>(s.Uniform() *
                                        static_cast<double>(max_length));
      std::vector<QueryPair> pairs;
      for (std::int64_t i = 0; i < length; ++i) {
        pairs.push_back(RandomValidPair(s, epsilon));
      }
      schedules.push_back(std::move(pairs));
    }
  }

  CsvTable table(
      Metadata(config, *params, static_cast<std::int64_t>(schedules.size())),
      {"schedule", "length", "alpha", "moment", "divergence", "bound", "margin",
       "max_log_ratio", "pass"});
  std::int64_t failures = 0;
  double worst_margin = INFINITY;
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    absl::StatusOr<DeterministicAdversary> adversary =
        DeterministicAdversary::Create(schedules[i], epsilon);
    if (!adversary.ok()) return adversary.status();
    const int horizon = static_cast<int>(schedules[i].size());
    absl::StatusOr<double> max_ratio = ExactMaxDivergence(*adversary, horizon);
    if (!max_ratio.ok()) return max_ratio.status();
    for (double alpha : alphas) {
      absl::StatusOr<double> moment = ExactRenyi(*adversary, alpha, horizon);
      if (!moment.ok()) return moment.status();
      const double bound = 1 + 3 * alpha * (alpha - 1) * epsilon * epsilon;
      const double margin = bound - *moment;
      const bool pass = margin >= -1e-12 && *max_ratio <= epsilon + 1e-12;
      failures += !pass;
      worst_margin = std::min(worst_margin, margin);
      table.AddRow({Cell(static_cast<std::int64_t>(i)), Cell(horizon),
                    Cell(alpha), Cell(*moment),
                    Cell(std::log(*moment) / (alpha - 1)), Cell(bound),
                    Cell(margin), Cell(*max_ratio), Cell(pass)});
    }
  }
  return CommandResult{
      table.Render(), failures == 0,
      absl::StrFormat("coin-verify: %d rows, %d failures, smallest margin %g",
                      table.rows(), failures, worst_margin)};
}

}  // namespace privsel::cli
