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

// Batch experiment runner for the lattice spectral engine. Talks to the
// engine exclusively through the C interface in latspec.h.
//
// Exit codes: 0 success / asserted claim holds, 1 usage or config error
// (the message names the failing field), 2 asserted claim fails.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latspec.h"

namespace {

using nlohmann::json;

constexpr const char* kOutDirEnv = "LATSPEC_OUT_DIR";

const std::vector<std::string> kCommands = {
    "bs-sweep",      "eig-count", "weak-coupling", "dispersive-fit",
    "strichartz",    "knapp",     "flatband",      "threshold-div",
    "holder-bv",     "ultra-probe", "continuum-dispersive"};

/// Owner for strings returned by the C interface.
struct CStr {
  char* p = nullptr;
  ~CStr() { latspec_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Handle {
  latspec_experiment* h = nullptr;
  ~Handle() { latspec_experiment_destroy(h); }
};

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 1;
}

/// Default dimension used only to expand the point/origin potential
/// shorthand when the config does not pin d; mirrors the engine's
/// per-command defaults.
long default_dim(const std::string& command) {
  if (command == "threshold-div" || command == "continuum-dispersive") return 2;
  if (command == "knapp" || command == "ultra-probe") return 3;
  if (command == "strichartz") return 4;
  return 1;
}

/// Expands "power:-2", "point:-1", "aniso:6", "flatband", or an inline
/// JSON object into a potential descriptor.
json parse_potential(const std::string& text, long d) {
  if (!text.empty() && text.front() == '{') return json::parse(text);
  if (text == "flatband") return json{{"kind", "flat_band_weight"}};
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (colon == std::string::npos || colon + 1 == text.size())
    throw std::runtime_error("potential: expected kind:value, got '" + text + "'");
  const std::string rest = text.substr(colon + 1);
  size_t used = 0;
  const double val = std::stod(rest, &used);
  if (used != rest.size())
    throw std::runtime_error("potential: bad number '" + rest + "'");
  if (head == "power") {
    if (val >= 0.0)
      throw std::runtime_error("potential: power shorthand takes a negative exponent");
    return json{{"kind", "power_decay"}, {"alpha", -val}};
  }
  if (head == "point") {
    return json{{"kind", "point_mass"},
                {"site", std::vector<long>(static_cast<size_t>(d), 0)},
                {"value", val}};
  }
  if (head == "aniso") return json{{"kind", "anisotropic_weight"}, {"p", val}};
  throw std::runtime_error("potential: unknown shorthand kind '" + head + "'");
}

/// Values for --set key=value: JSON when it parses, raw string otherwise.
json parse_set_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);
  }
}

/// Flags shared by every experiment subcommand. Only one subcommand
/// parses per invocation, so one storage block serves them all.
struct Flags {
  std::string config_path;
  std::string potential;
  std::string assert_claim;
  std::string out_dir;
  long d = 0;
  long seed = 0;
  long threads = 0;
  std::vector<std::string> sets;
};

/// Override flags shared by the experiment subcommands and `run`. Excludes
/// --config, which `run` replaces with a required positional of the same name.
void add_override_options(CLI::App* sub, Flags* f) {
  sub->add_option("--d", f->d, "lattice dimension");
  sub->add_option("--potential", f->potential,
                  "potential: power:<neg exp>, point:<value>, aniso:<p>, flatband, "
                  "or an inline JSON object");
  sub->add_option("--assert", f->assert_claim,
                  "claim to check after the run; exit 2 when it fails");
  sub->add_option("--out", f->out_dir, "artifact directory (default $" +
                                           std::string(kOutDirEnv) + " or latspec-out/<command>)");
  sub->add_option("--seed", f->seed, "seed for randomized families");
  sub->add_option("--threads", f->threads,
                  "worker budget; the current engine computes with a single worker");
  sub->add_option("--set", f->sets,
                  "extra config field as key=value (value parsed as JSON; repeatable)");
}

void add_common_options(CLI::App* sub, Flags* f) {
  sub->add_option("--config", f->config_path, "JSON config file; flags override its values");
  add_override_options(sub, f);
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

/// Applies flag overrides onto the file config. The caller tells us which
/// flags were actually given via the parsed subcommand's counts.
json build_config(const CLI::App* sub, const Flags& f, const std::string& command) {
  json cfg = json::object();
  if (sub->count("--config") > 0) {
    cfg = load_config_file(f.config_path);
    if (!cfg.is_object()) throw std::runtime_error("config: expected a JSON object");
  }
  cfg["command"] = command;
  if (sub->count("--d") > 0) cfg["d"] = f.d;
  if (sub->count("--seed") > 0) cfg["seed"] = f.seed;
  if (sub->count("--threads") > 0) cfg["threads"] = f.threads;
  if (sub->count("--assert") > 0) cfg["assert"] = f.assert_claim;
  for (const std::string& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("--set: expected key=value, got '" + kv + "'");
    cfg[kv.substr(0, eq)] = parse_set_value(kv.substr(eq + 1));
  }
  if (sub->count("--potential") > 0) {
    long d = default_dim(command);
    if (cfg.contains("d") && cfg["d"].is_number_integer()) d = cfg["d"].get<long>();
    cfg["potential"] = parse_potential(f.potential, d);
  }
  return cfg;
}

std::string resolve_out_dir(const CLI::App* sub, const Flags& f, const json& cfg,
                            const std::string& command) {
  if (sub->count("--out") > 0) return f.out_dir;
  if (cfg.contains("out_dir") && cfg["out_dir"].is_string() &&
      !cfg["out_dir"].get<std::string>().empty())
    return cfg["out_dir"].get<std::string>();
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && env[0] != '\0')
    return std::string(env) + "/" + command;
  return "latspec-out/" + command;
}

/// Creates, runs, writes artifacts, prints the summary, and evaluates the
/// asserted claim if any. Returns the process exit code.
int execute(const json& cfg, const std::string& out_dir) {
  Handle exp;
  if (latspec_experiment_create(cfg.dump().c_str(), &exp.h) != LATSPEC_OK)
    return usage_error(latspec_last_error());
  if (latspec_experiment_run(exp.h) != LATSPEC_OK)
    return usage_error(latspec_last_error());
  if (latspec_experiment_write_artifacts(exp.h, out_dir.c_str()) != LATSPEC_OK)
    return usage_error(latspec_last_error());
  std::cerr << "artifacts: " << out_dir << "\n";

  CStr summary;
  if (latspec_experiment_summary_json(exp.h, &summary.p) != LATSPEC_OK)
    return usage_error(latspec_last_error());
  std::cout << json::parse(summary.str()).dump(2) << "\n";

  std::string claim;
  if (cfg.contains("assert") && cfg["assert"].is_string())
    claim = cfg["assert"].get<std::string>();
  if (claim.empty()) return 0;

  int pass = 0;
  CStr detail;
  if (latspec_experiment_check(exp.h, claim.c_str(), &pass, &detail.p) != LATSPEC_OK)
    return usage_error(latspec_last_error());
  std::cerr << "assert " << claim << ": " << (pass ? "PASS" : "FAIL");
  if (!detail.str().empty()) std::cerr << " (" << detail.str() << ")";
  std::cerr << "\n";
  return pass ? 0 : 2;
}

int list_commands(const std::string& filter, bool as_json) {
  CStr catalog;
  if (latspec_catalog_json(&catalog.p) != LATSPEC_OK)
    return usage_error(latspec_last_error());
  const json rows = json::parse(catalog.str());

  if (!filter.empty()) {
    bool known = false;
    for (const auto& row : rows)
      if (row.at("command").get<std::string>() == filter) known = true;
    if (!known) return usage_error("unknown command '" + filter + "'");
  }
  if (as_json) {
    json out = json::array();
    for (const auto& row : rows)
      if (filter.empty() || row.at("command").get<std::string>() == filter) out.push_back(row);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& row : rows) {
    const std::string cmd = row.at("command").get<std::string>();
    if (!filter.empty() && cmd != filter) continue;
    std::cout << cmd << " — " << row.at("claim").get<std::string>() << "\n"
              << "    " << row.at("description").get<std::string>() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("lattice spectral engine ") + latspec_version() +
               " — batch experiment runner"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<CLI::App*> experiment_subs;
  for (const std::string& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_common_options(sub, &flags);
    experiment_subs.push_back(sub);
  }

  std::string list_filter;
  bool list_json = false;
  CLI::App* list_sub = app.add_subcommand("list", "list commands and the claims they check");
  list_sub->add_option("command", list_filter, "show only this command");
  list_sub->add_flag("--json", list_json, "emit the catalog as JSON");

  std::string run_config_path;
  CLI::App* run_sub =
      app.add_subcommand("run", "run an experiment described entirely by a config file");
  run_sub->add_option("config", run_config_path, "JSON config file with a command field")
      ->required();
  add_override_options(run_sub, &flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list_sub->parsed()) return list_commands(list_filter, list_json);

    if (run_sub->parsed()) {
      json cfg = load_config_file(run_config_path);
      if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string())
        return usage_error("config.command: expected a string naming the experiment");
      const std::string command = cfg["command"].get<std::string>();
      if (run_sub->count("--d") > 0) cfg["d"] = flags.d;
      if (run_sub->count("--seed") > 0) cfg["seed"] = flags.seed;
      if (run_sub->count("--threads") > 0) cfg["threads"] = flags.threads;
      if (run_sub->count("--assert") > 0) cfg["assert"] = flags.assert_claim;
      for (const std::string& kv : flags.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
          return usage_error("--set: expected key=value, got '" + kv + "'");
        cfg[kv.substr(0, eq)] = parse_set_value(kv.substr(eq + 1));
      }
      if (run_sub->count("--potential") > 0) {
        long d = default_dim(command);
        if (cfg.contains("d") && cfg["d"].is_number_integer()) d = cfg["d"].get<long>();
        cfg["potential"] = parse_potential(flags.potential, d);
      }
      return execute(cfg, resolve_out_dir(run_sub, flags, cfg, command));
    }

    for (size_t i = 0; i < experiment_subs.size(); ++i) {
      if (!experiment_subs[i]->parsed()) continue;
      const json cfg = build_config(experiment_subs[i], flags, kCommands[i]);
      return execute(cfg, resolve_out_dir(experiment_subs[i], flags, cfg, kCommands[i]));
    }
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  return usage_error("no subcommand selected");
}
