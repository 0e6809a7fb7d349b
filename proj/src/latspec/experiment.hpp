// Copyright (c) 2026 The latspec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csvjson.hpp"

namespace latspec {

/// One batch experiment: a named command plus a validated parameter block.
/// Construction validates the full schema (invalid_argument carries the
/// failing field path, e.g. "config.potential.alpha: expected a number");
/// run() executes and fills the summary and CSV tables.
class Experiment {
 public:
  explicit Experiment(json config);

  const std::string& command() const { return command_; }
  const json& config() const { return config_; }

  void run();
  bool has_run() const { return ran_; }

  /// Machine-readable result; throws if run() has not completed.
  const json& summary() const;

  /// Writes <name>.csv per table, summary.json, and manifest.json into dir
  /// (created if missing). The manifest's generated_at / wall_ms fields are
  /// the only bytes that vary between identical replays.
  void write_artifacts(const std::string& dir) const;

  /// Evaluates a claim string against the result (e.g. "bounded" for a
  /// sweep, "decay_exponent" for a fit command). Unknown claims throw
  /// invalid_argument listing the claims this command supports.
  bool check(const std::string& claim, std::string* detail = nullptr) const;

  /// Claims check() accepts for this command.
  std::vector<std::string> claims() const;

 private:
  json config_;
  std::string command_;
  json summary_;
  std::vector<std::pair<std::string, CsvTable>> tables_;
  bool ran_ = false;
  double wall_ms_ = 0.0;
};

/// Rows {command, claim, description} for every command, in a fixed
/// order; backs the CLI `list` output and the C catalog call.
json experiment_catalog();

}  // namespace latspec
