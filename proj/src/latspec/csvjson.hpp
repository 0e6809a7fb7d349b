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
#include <vector>

#include <json.hpp>

#include "potential.hpp"

namespace latspec {

using json = nlohmann::json;

/// %.17g rendering: enough digits to round-trip a double exactly, and the
/// same bytes on every run (artifact determinism relies on it).
std::string format_g17(double v);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes header + %.17g rows; throws errc::io on failure.
void write_csv(const std::string& path, const CsvTable& table);

/// Writes j.dump(2) plus a trailing newline; throws errc::io on failure.
void write_json_file(const std::string& path, const json& j);

/// Potential serialization, e.g. {"kind":"power_decay","alpha":2,...}.
/// Only the fields meaningful for the kind are emitted / consumed.
json potential_to_json(const Potential& v);
Potential potential_from_json(const json& j);

}  // namespace latspec
