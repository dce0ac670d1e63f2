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

// select-demo: runs one selection mechanism on a score table, once per trial.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "commands.h"
#include "privsel/better_than_median.h"
#include "privsel/framework.h"
#include "privsel/stable_selection.h"
#include "privsel/top_k.h"

namespace privsel::cli {

absl::StatusOr<std::vector<double>> ParseScoreColumn(absl::string_view text) {
  std::vector<double> scores;
  int line_number = 0;
  bool seen_content = false;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const absl::string_view field =
        absl::StripAsciiWhitespace(line.substr(0, line.find(',')));
    double value;
    if (!absl::SimpleAtod(field, &value) || !std::isfinite(value)) {
      if (!seen_content) {  // a header line
        seen_content = true;
        continue;
      }
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": expected a score, got \"", field, "\""));
    }
    seen_content = true;
    scores.push_back(value);
  }
  return scores;
}

namespace {

struct ScoreTable {
  std::vector<double> scores;
};

ScoreFamily<ScoreTable> FamilyOf(std::size_t m,
                                 std::optional<double> total_sensitivity) {
  ScoreFamily<ScoreTable> family;
  for (std::size_t i = 0; i < m; ++i) {
    family.evaluators.push_back(
        [i](const ScoreTable& d) { return d.scores[i]; });
  }
  family.total_sensitivity = total_sensitivity;
  return family;
}

absl::StatusOr<std::vector<double>> LoadScores(const Params& params) {
  if (params.Has("scores_file")) {
    if (params.Has("scores")) {
      return absl::InvalidArgumentError("give scores or scores_file, not both");
    }
    const std::string path = params.String("scores_file");
    std::ifstream in(path, std::ios::binary);
    if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
    std::stringstream text;
    text << in.rdbuf();
    absl::StatusOr<std::vector<double>> scores = ParseScoreColumn(text.str());
    if (!scores.ok()) {
      return absl::Status(scores.status().code(),
                          absl::StrCat(path, ": ", scores.status().message()));
    }
    return scores;
  }
  return params.Reals("scores");
}

}  // namespace

absl::StatusOr<CommandResult> RunSelectDemo(const ExperimentConfig& config) {
  absl::StatusOr<Params> params = Params::Create(
      config.params, {{"mechanism", ParamType::kString, "top-k"},
                      {"scores", ParamType::kRealList, {}},
                      {"scores_file", ParamType::kString, {}},
                      {"k", ParamType::kInt, 1},
                      {"epsilon", ParamType::kReal, 0.5},
                      {"delta", ParamType::kReal, 1e-3},
                      {"beta", ParamType::kReal, 0.05},
                      {"total_sensitivity", ParamType::kReal, 1}});
  if (!params.ok()) return params.status();
  const bool default_scores =
      !params->Has("scores") && !params->Has("scores_file");
  absl::StatusOr<std::vector<double>> scores =
      default_scores ? std::vector<double>{60, 50, 40, 30, 20, 10, 0}
                     : LoadScores(*params);
  if (!scores.ok()) return scores.status();
  if (scores->size() < 2) {
    return absl::InvalidArgumentError("need at least two candidates");
  }
  const std::string mechanism = params->String("mechanism");
  if (mechanism != "top-k" && mechanism != "choosing" &&
      mechanism != "stable") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown mechanism '", mechanism,
                     "'; expected top-k, choosing or stable"));
  }
  const int k = static_cast<int>(params->Int("k"));
  const ScoreTable data{*scores};
  const ScoreFamily<ScoreTable> family =
      FamilyOf(scores->size(), params->Real("total_sensitivity"));
  const std::int64_t trials = TrialsOr(config, 10);
  const double best = *std::max_element(scores->begin(), scores->end());
  const RandomStream root(config.seed);

  CsvTable table(Metadata(config, *params, trials),
                 {"trial", "mechanism", "selected", "loss", "certificate",
                  "empty", "corrected", "cost_epsilon", "cost_delta"});
  for (std::int64_t t = 0; t < trials; ++t) {
    std::string selected;
    double loss = 0, certificate = 0;
    bool empty = false, corrected = false;
    PrivacyCost cost;
    if (mechanism == "top-k") {
      TopKParams p{k, params->Real("epsilon"), params->Real("delta"),
                   params->Real("beta")};
      absl::StatusOr<TopKResult> r = TopKSelect(family, p, data, root.Split(t));
      if (!r.ok()) return r.status();
      selected = absl::StrJoin(r->selected, ";");
      loss = *Gap(r->selected, *scores);
      certificate = r->certificate;
      empty = r->empty;
      corrected = r->corrected;
      cost = r->cost;
    } else {
      absl::StatusOr<Framework<ScoreTable>> framework =
          Framework<ScoreTable>::Create(1, data, root.Split(t));
      if (!framework.ok()) return framework.status();
      const ChoiceParams p{params->Real("epsilon"), params->Real("delta"),
                           params->Real("beta")};
      absl::StatusOr<FunctionChoice> choice =
          mechanism == "choosing" ? ChoosingMechanism(family, p, *framework)
                                  : StableSelect(family, k, p, *framework);
      if (!choice.ok()) return choice.status();
      empty = !choice->index.has_value();
      if (!empty) {
        selected = absl::StrCat(*choice->index);
        loss = best - (*scores)[*choice->index];
        certificate = choice->noisy_score;
      }
      cost = choice->cost;
    }
    table.AddRow({Cell(t), Cell(mechanism), Cell(selected), Cell(loss),
                  Cell(certificate), Cell(empty), Cell(corrected),
                  Cell(cost.epsilon), Cell(cost.delta)});
  }
  return CommandResult{
      table.Render(), true,
      absl::StrFormat("select-demo: %d trials of %s", trials, mechanism)};
}

}  // namespace privsel::cli
