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

#include "csvjson.hpp"

#include <cstdio>
#include <fstream>

#include "errors.hpp"

namespace latspec {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot open for writing: " + path);
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw error(errc::invalid_argument, "csv row width does not match header: " + path);
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_g17(row[i]);
    }
    out << '\n';
  }
  if (!out.flush()) throw error(errc::io, "write failed: " + path);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::io, "cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out.flush()) throw error(errc::io, "write failed: " + path);
}

json potential_to_json(const Potential& v) {
  json j;
  j["kind"] = v.kind_name();
  switch (v.kind) {
    case Potential::Kind::power_decay:
      j["alpha"] = v.alpha;
      j["amplitude"] = v.amplitude;
      j["sign"] = v.sign;
      break;
    case Potential::Kind::point_mass:
      j["site"] = v.site;
      j["value"] = v.value;
      break;
    case Potential::Kind::table: {
      json arr = json::array();
      for (const auto& e : v.entries) arr.push_back({{"site", e.first}, {"value", e.second}});
      j["entries"] = arr;
      break;
    }
    case Potential::Kind::anisotropic_weight:
      j["p"] = v.p;
      break;
    case Potential::Kind::flat_band_weight:
      break;
  }
  return j;
}

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
  throw error(errc::invalid_argument, "potential." + path + ": " + why);
}

std::vector<long> site_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad_field(path, "expected a non-empty coordinate array");
  std::vector<long> out;
  for (const auto& c : j) {
    if (!c.is_number_integer()) bad_field(path, "coordinates must be integers");
    out.push_back(c.get<long>());
  }
  return out;
}

}  // namespace

Potential potential_from_json(const json& j) {
  if (!j.is_object()) bad_field("", "expected an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) bad_field("kind", "expected a string");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "power_decay") {
    if (!j.contains("alpha") || !j.at("alpha").is_number())
      bad_field("alpha", "expected a number");
    const double alpha = j.at("alpha").get<double>();
    const double amplitude = j.value("amplitude", 1.0);
    const int sign = j.value("sign", -1);
    if (sign != 1 && sign != -1) bad_field("sign", "expected +1 or -1");
    return Potential::PowerDecay(alpha, amplitude, sign);
  }
  if (kind == "point_mass") {
    if (!j.contains("site")) bad_field("site", "missing");
    if (!j.contains("value") || !j.at("value").is_number())
      bad_field("value", "expected a number");
    return Potential::PointMass(site_from(j.at("site"), "site"), j.at("value").get<double>());
  }
  if (kind == "table") {
    if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").empty())
      bad_field("entries", "expected a non-empty array");
    std::vector<std::pair<std::vector<long>, double>> entries;
    size_t i = 0;
    for (const auto& e : j.at("entries")) {
      const std::string p = "entries[" + std::to_string(i++) + "]";
      if (!e.is_object() || !e.contains("site") || !e.contains("value") ||
          !e.at("value").is_number())
        bad_field(p, "expected {site, value}");
      entries.emplace_back(site_from(e.at("site"), p + ".site"), e.at("value").get<double>());
    }
    return Potential::Table(std::move(entries));
  }
  if (kind == "anisotropic_weight") {
    if (!j.contains("p") || !j.at("p").is_number()) bad_field("p", "expected a number");
    return Potential::AnisotropicWeight(j.at("p").get<double>());
  }
  if (kind == "flat_band_weight") return Potential::FlatBandWeight();
  bad_field("kind", "unknown kind '" + kind + "'");
}

}  // namespace latspec
