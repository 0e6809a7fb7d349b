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

// End-to-end tests of the command-line runner; the binary path arrives in
// the LATSPEC_CLI environment variable.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* cli_path() {
  const char* p = std::getenv("LATSPEC_CLI");
  REQUIRE_MESSAGE(p != nullptr, "LATSPEC_CLI must point at the runner binary");
  return p;
}

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

RunResult run_cli(const std::vector<std::string>& args) {
  static int counter = 0;
  const fs::path base = fs::temp_directory_path() / ("latspec_cli_io_" + std::to_string(counter++));
  const fs::path out = base.string() + ".out";
  const fs::path err = base.string() + ".err";
  std::string cmd = shell_quote(cli_path());
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " > " + shell_quote(out.string()) + " 2> " + shell_quote(err.string());
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("latspec_cli_" + tag);
  fs::remove_all(dir);
  return dir;
}

const std::string kEps = "eps_list=[1e-2,3.1622776601683794e-3,1e-3]";

}  // namespace

TEST_CASE("list prints all commands and rejects unknown ones") {
  const RunResult all = run_cli({"list"});
  CHECK(all.exit_code == 0);
  for (const char* cmd :
       {"bs-sweep", "eig-count", "weak-coupling", "dispersive-fit", "strichartz", "knapp",
        "flatband", "threshold-div", "holder-bv", "ultra-probe", "continuum-dispersive"})
    CHECK(all.out.find(cmd) != std::string::npos);

  CHECK(run_cli({"list", "bs-sweep"}).exit_code == 0);
  const RunResult bad = run_cli({"list", "frobnicate"});
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("frobnicate") != std::string::npos);

  const RunResult js = run_cli({"list", "--json"});
  CHECK(js.exit_code == 0);
  CHECK(json::parse(js.out).size() == 11);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli({}).exit_code == 1);
  CHECK(run_cli({"frobnicate"}).exit_code == 1);

  const RunResult missing = run_cli({"bs-sweep"});
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("config.d") != std::string::npos);

  const RunResult badfield = run_cli({"knapp", "--set", "bogus=1"});
  CHECK(badfield.exit_code == 1);
  CHECK(badfield.err.find("config.bogus") != std::string::npos);
}

TEST_CASE("a passing assertion exits 0 and a failing one exits 2") {
  const auto dir = fresh_dir("assert");
  const RunResult ok = run_cli({"ultra-probe", "--set", "probe=surface", "--set", kEps,
                                "--assert", "log_divergent", "--out", dir.string()});
  CHECK(ok.exit_code == 0);
  CHECK(ok.err.find("PASS") != std::string::npos);
  const json summary = json::parse(ok.out);
  CHECK(summary.at("verdict") == "log_divergent");
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "ultra.csv"));

  const RunResult fail = run_cli({"ultra-probe", "--set", "probe=surface", "--set", kEps,
                                  "--assert", "bounded", "--out", dir.string()});
  CHECK(fail.exit_code == 2);
  CHECK(fail.err.find("FAIL") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("flags override config-file values") {
  const auto dir = fresh_dir("override");
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"command":"ultra-probe","probe":"surface",)"
        << R"("eps_list":[1e-2,3.1622776601683794e-3,1e-3],"inner_cut":0.02})";
  }
  // The file's inner cutoff makes the form bounded.
  const RunResult as_file =
      run_cli({"run", cfg.string(), "--assert", "bounded", "--out", (dir / "a").string()});
  CHECK(as_file.exit_code == 0);

  // Overriding the cutoff on the command line restores the divergence.
  const RunResult overridden =
      run_cli({"run", cfg.string(), "--set", "inner_cut=0.0", "--assert", "log_divergent",
               "--out", (dir / "b").string()});
  CHECK(overridden.exit_code == 0);
  fs::remove_all(dir);
}

TEST_CASE("replaying a config reproduces artifacts byte for byte") {
  const auto dir = fresh_dir("replay");
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"command":"threshold-div","d":2,"seed":5,)"
        << R"("mu_list":[0.1,0.05,0.025],"n_max":4096})";
  }
  const RunResult a = run_cli({"run", cfg.string(), "--out", (dir / "a").string()});
  const RunResult b = run_cli({"run", cfg.string(), "--out", (dir / "b").string()});
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);

  CHECK(slurp(dir / "a" / "threshold.csv") == slurp(dir / "b" / "threshold.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  json ma = json::parse(slurp(dir / "a" / "manifest.json"));
  json mb = json::parse(slurp(dir / "b" / "manifest.json"));
  for (const char* volatile_key : {"generated_at", "wall_ms"}) {
    ma.erase(volatile_key);
    mb.erase(volatile_key);
  }
  CHECK(ma == mb);
  fs::remove_all(dir);
}

TEST_CASE("the documented potential shorthand drives a real sweep command") {
  const auto dir = fresh_dir("shorthand");
  const RunResult r = run_cli({"threshold-div", "--d", "2", "--potential", "point:-1",
                               "--assert", "log_divergent", "--out", dir.string()});
  CHECK(r.exit_code == 0);
  const json summary = json::parse(r.out);
  CHECK(summary.at("potential").at("kind") == "point_mass");
  fs::remove_all(dir);
}
