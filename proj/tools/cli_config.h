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

// Plumbing shared by the privsel subcommands: the experiment config, typed
// parameter access against a per-command schema, and CSV emission with a
// JSON metadata header.

#ifndef PRIVSEL_TOOLS_CLI_CONFIG_H_
#define PRIVSEL_TOOLS_CLI_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "json.hpp"

namespace privsel::cli {

using Json = nlohmann::json;

struct ExperimentConfig {
  std::string subcommand;
  Json params = Json::object();  // the config file, verbatim
  std::uint64_t seed = 1;
  std::optional<std::int64_t> trials;  // nullopt: the command's default
  std::string out;                     // empty: standard output
  bool pure_dp = false;
};

// Parses a config file. The file holds one JSON object of parameters.
absl::StatusOr<Json> LoadConfigFile(const std::string& path);

enum class ParamType { kReal, kInt, kString, kBool, kRealList };

struct ParamSpec {
  std::string name;
  ParamType type;
  Json fallback;  // null: optional with no default
};

// Parameters checked against a schema: unknown keys and mistyped values are
// rejected up front, so the accessors cannot fail afterwards.
class Params {
 public:
  static absl::StatusOr<Params> Create(const Json& given,
                                       const std::vector<ParamSpec>& schema);

  bool Has(const std::string& name) const;
  double Real(const std::string& name) const;
  std::int64_t Int(const std::string& name) const;
  std::string String(const std::string& name) const;
  bool Bool(const std::string& name) const;
  std::vector<double> Reals(const std::string& name) const;
  // Given values merged over the defaults.
  const Json& resolved() const { return resolved_; }

 private:
  explicit Params(Json resolved) : resolved_(std::move(resolved)) {}
  Json resolved_;
};

// A CSV table whose first line is "# " followed by a JSON metadata object.
class CsvTable {
 public:
  CsvTable(Json metadata, std::vector<std::string> columns);

  // Cells must match the column count.
  void AddRow(const std::vector<std::string>& cells);
  std::int64_t rows() const { return rows_; }
  std::string Render() const;

 private:
  Json metadata_;
  std::vector<std::string> columns_;
  std::string body_;
  std::int64_t rows_ = 0;
};

// Round-trippable, locale-independent number formatting.
std::string Cell(double value);
std::string Cell(std::int64_t value);
std::string Cell(int value);
std::string Cell(bool value);
std::string Cell(absl::string_view text);  // quoted when needed
std::string Cell(const char* text);

// The metadata header every command writes: the experiment identity, the
// verbatim config and the resolved parameters.
Json Metadata(const ExperimentConfig& config, const Params& params,
              std::int64_t trials);

// Reads back the metadata object from rendered output.
absl::StatusOr<Json> ParseMetadata(absl::string_view csv);

struct CommandResult {
  std::string csv;
  bool passed = true;   // every acceptance threshold met
  std::string summary;  // one line for stderr
};

std::int64_t TrialsOr(const ExperimentConfig& config, std::int64_t fallback);

}  // namespace privsel::cli

#endif  // PRIVSEL_TOOLS_CLI_CONFIG_H_
