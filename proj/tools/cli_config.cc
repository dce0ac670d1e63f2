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

#include "cli_config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace privsel::cli {
namespace {

const char* TypeName(ParamType type) {
  switch (type) {
    case ParamType::kReal:
      return "a number";
    case ParamType::kInt:
      return "an integer";
    case ParamType::kString:
      return "a string";
    case ParamType::kBool:
      return "a boolean";
    case ParamType::kRealList:
      return "a number or a list of numbers";
  }
  return "?";
}

bool IsIntegral(const Json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double x = v.get<double>();
  return std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15;
}

bool Matches(const Json& v, ParamType type) {
  switch (type) {
    case ParamType::kReal:
      return v.is_number();
    case ParamType::kInt:
      return IsIntegral(v);
    case ParamType::kString:
      return v.is_string();
    case ParamType::kBool:
      return v.is_boolean();
    case ParamType::kRealList:
      if (v.is_number()) return true;
      if (!v.is_array() || v.empty()) return false;
      for (const Json& x : v) {
        if (!x.is_number()) return false;
      }
      return true;
  }
  return false;
}

}  // namespace

absl::StatusOr<Json> LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream text;
  text << in.rdbuf();
  Json parsed = Json::parse(text.str(), nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": not valid JSON"));
  }
  if (!parsed.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": expected a JSON object of parameters"));
  }
  return parsed;
}

absl::StatusOr<Params> Params::Create(const Json& given,
                                      const std::vector<ParamSpec>& schema) {
  if (!given.is_object()) {
    return absl::InvalidArgumentError("parameters must form a JSON object");
  }
  for (const auto& [key, value] : given.items()) {
    const ParamSpec* spec = nullptr;
    for (const ParamSpec& s : schema) {
      if (s.name == key) spec = &s;
    }
    if (spec == nullptr) {
      std::vector<std::string> known;
      for (const ParamSpec& s : schema) known.push_back(s.name);
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key,
                       "'; accepted keys: ", absl::StrJoin(known, ", ")));
    }
    if (!Matches(value, spec->type)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config key '", key, "' must be ", TypeName(spec->type)));
    }
  }
  Json resolved = Json::object();
  for (const ParamSpec& s : schema) {
    if (given.contains(s.name)) {
      resolved[s.name] = given.at(s.name);
    } else if (!s.fallback.is_null()) {
      resolved[s.name] = s.fallback;
    }
  }
  return Params(std::move(resolved));
}

bool Params::Has(const std::string& name) const {
  return resolved_.contains(name);
}

double Params::Real(const std::string& name) const {
  return resolved_.at(name).get<double>();
}

std::int64_t Params::Int(const std::string& name) const {
  const Json& v = resolved_.at(name);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  return static_cast<std::int64_t>(v.get<double>());
}

std::string Params::String(const std::string& name) const {
  return resolved_.at(name).get<std::string>();
}

bool Params::Bool(const std::string& name) const {
  return resolved_.at(name).get<bool>();
}

std::vector<double> Params::Reals(const std::string& name) const {
  const Json& v = resolved_.at(name);
  if (v.is_number()) return {v.get<double>()};
  return v.get<std::vector<double>>();
}

CsvTable::CsvTable(Json metadata, std::vector<std::string> columns)
    : metadata_(std::move(metadata)), columns_(std::move(columns)) {}

void CsvTable::AddRow(const std::vector<std::string>& cells) {
  body_ += absl::StrJoin(cells, ",");
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::Render() const {
  return absl::StrCat("# ", metadata_.dump(), "\n",
                      absl::StrJoin(columns_, ","), "\n", body_);
}

std::string Cell(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string Cell(std::int64_t value) { return absl::StrCat(value); }
std::string Cell(int value) { return absl::StrCat(value); }
std::string Cell(bool value) { return value ? "1" : "0"; }

std::string Cell(absl::string_view text) {
  if (text.find_first_of(",\"\n") == absl::string_view::npos) {
    return std::string(text);
  }
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string Cell(const char* text) { return Cell(absl::string_view(text)); }

Json Metadata(const ExperimentConfig& config, const Params& params,
              std::int64_t trials) {
  return Json{{"subcommand", config.subcommand},
              {"seed", config.seed},
              {"trials", trials},
              {"pure_dp", config.pure_dp},
              {"config", config.params},
              {"resolved", params.resolved()}};
}

absl::StatusOr<Json> ParseMetadata(absl::string_view csv) {
  if (!absl::StartsWith(csv, "# ")) {
    return absl::InvalidArgumentError("output lacks a metadata header");
  }
  const std::size_t end = csv.find('\n');
  Json parsed =
      Json::parse(std::string(csv.substr(2, end - 2)), nullptr, false);
  if (parsed.is_discarded()) {
    return absl::InvalidArgumentError("metadata header is not valid JSON");
  }
  return parsed;
}

std::int64_t TrialsOr(const ExperimentConfig& config, std::int64_t fallback) {
  return config.trials.value_or(fallback);
}

}  // namespace privsel::cli
