// Copyright 2026 The chiralsim Authors
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

#include "chiral/scenarios.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace chiral;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome sh(const std::string& args) {
  const std::string cmd = std::string(CHIRALSIM_BIN) + " " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) o.output += buf;
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("chiralsim_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path only_run_dir(const fs::path& root, const std::string& scenario) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root / scenario)) dirs.push_back(e.path());
  REQUIRE(dirs.size() == 1);
  return dirs.front();
}

}  // namespace

TEST_CASE("text parameter files") {
  const ParamMap p = parse_params(
      "# ring drives\n"
      "omega.1 = 0.2\n"
      "alpha.1 = pi/2   # flux phase\n"
      "alpha.2 = -0.5*pi\n"
      "\n"
      "stark_compensation = false\n",
      "cfg");
  CHECK(p.number("omega.1") == 0.2);
  CHECK(p.number("alpha.1") == doctest::Approx(kPi / 2));
  CHECK(p.number("alpha.2") == doctest::Approx(-kPi / 2));
  CHECK_FALSE(p.flag("stark_compensation"));

  try {
    parse_params("omega.1 = 0.2\n\n  delta.1 -4\n", "cfg");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("cfg:3:3") == 0);
  }
  CHECK_THROWS_AS(parse_params("a = 1\na = 2\n", "cfg"), ParseError);
  CHECK_THROWS_AS(parse_params("a =\n", "cfg"), ParseError);
  CHECK_THROWS_AS(parse_params("9a = 1\n", "cfg"), ParseError);
}

TEST_CASE("JSON parameter files and run records") {
  const ParamMap j = parse_params(R"({"omega.1": 0.3, "initial": "geg"})", "j");
  CHECK(j.number("omega.1") == 0.3);
  CHECK(j.text("initial") == "geg");
  const ParamMap rec = parse_params(R"({"scenario": "x", "config": {"R": 3.0}})", "r");
  CHECK(rec.number("R") == 3.0);
  CHECK_FALSE(rec.has("scenario"));
  try {
    parse_params("{\n  \"a\": 1,\n  \"b\": ]\n}", "j");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("unknown keys are rejected") {
  ParamMap p;
  p.set("omgea.1", 0.2);
  CHECK_THROWS_AS(run_scenario("honeycomb-couplings", p, RunOptions{}), ParseError);
  CHECK_THROWS_AS(scenario_defaults("no-such-scenario"), ConfigError);
}

TEST_CASE("CSV round trip") {
  TimeSeries s;
  s.times = {0.0, 0.1};
  s.labels = {"egg", "geg"};
  s.populations = {{1.0, 0.75}, {0.0, 0.25}};
  s.trace = {1.0, 1.0};
  s.min_eig = {0.0, std::numeric_limits<double>::quiet_NaN()};
  s.hermitian_defect = {0.0, 0.0};
  const fs::path dir = scratch("csv");
  write_series_csv(s, (dir / "s.csv").string());
  CHECK(slurp(dir / "s.csv").rfind("t_us,P_egg,P_geg,trace,min_eig\n", 0) == 0);
  const TimeSeries r = read_series_csv((dir / "s.csv").string());
  CHECK(r.labels == s.labels);
  CHECK(r.populations == s.populations);
  CHECK(std::isnan(r.min_eig[1]));
}

TEST_CASE("list and coupling tables") {
  const Outcome l = sh("list");
  CHECK(l.code == 0);
  for (const std::string& n : scenario_names()) CHECK(l.output.find(n) != std::string::npos);

  const Outcome c = sh("couplings");
  CHECK(c.code == 0);
  CHECK(c.output.find("10.00000") != std::string::npos);
  CHECK(c.output.find("flux (rad): 1.570796") != std::string::npos);

  const Outcome z = sh("couplings --set omega.1=0 --set omega.2=0 --set omega.3=0");
  CHECK(z.code == 0);
  CHECK(z.output.find("0.00000") != std::string::npos);
  CHECK(z.output.find("10.00000") == std::string::npos);

  const Outcome s = sh("couplings --set delta.2=0");
  CHECK(s.code == 0);
  CHECK(s.output.find("singular") != std::string::npos);
  CHECK(s.output.find("10.00000") != std::string::npos);

  const Outcome h = sh("couplings honeycomb-couplings");
  CHECK(h.code == 0);
  CHECK(h.output.find("1.00901") != std::string::npos);
  CHECK(h.output.find("0.48612") != std::string::npos);
  CHECK(h.output.find("0.47845") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  std::ofstream(dir / "bad.cfg") << "omega.1 = 0.2\nR 2.96\n";
  const Outcome bad = sh("run --config " + (dir / "bad.cfg").string() + " --out " + dir.string());
  CHECK(bad.code == kExitConfig);
  CHECK(bad.output.find("bad.cfg:2:1") != std::string::npos);

  CHECK(sh("run --set nonsense=1 --out " + dir.string()).code == kExitConfig);
  CHECK(sh("run no-such-scenario --out " + dir.string()).code == kExitConfig);
  CHECK(sh("run triangle-full --t-end 1 --dt 0.01 --out " + dir.string()).code == kExitConfig);

  const Outcome guard = sh("run coherence-two-atom --set frame=two_atom --out " + dir.string());
  CHECK(guard.code == kExitPrecondition);
  CHECK(guard.output.find("step") != std::string::npos);

  // The rotated frame at the bare step bound goes measurably non-positive.
  const Outcome inv = sh("run triangle-rotated --set dt_refine=1 --out " + dir.string());
  CHECK(inv.code == kExitInvariant);
}

TEST_CASE("run writes a CSV and a re-runnable record") {
  const fs::path dir = scratch("rerun");
  const Outcome first = sh("run triangle-effective --out " + (dir / "a").string());
  REQUIRE(first.code == 0);
  const fs::path run_a = only_run_dir(dir / "a", "triangle-effective");
  const std::string csv = slurp(run_a / "series.csv");
  CHECK(csv.rfind("t_us,P_ggg,", 0) == 0);
  const auto record = nlohmann::json::parse(slurp(run_a / "record.json"));
  CHECK(record["scenario"] == "triangle-effective");
  CHECK(record["invariants"]["passed"] == true);
  CHECK(record["results"]["chirality"]["direction"] == 1);
  CHECK(record["config"].contains("omega.1"));

  const Outcome again =
      sh("run --config " + (run_a / "record.json").string() + " --out " + (dir / "b").string());
  REQUIRE(again.code == 0);
  const fs::path run_b = only_run_dir(dir / "b", "triangle-effective");
  CHECK(slurp(run_b / "series.csv") == csv);

  const TimeSeries s = read_series_csv((run_a / "series.csv").string());
  CHECK(check_invariants(s).trace_ok);
  CHECK(check_invariants(s).populations_ok);
}

TEST_CASE("honeycomb run emits the coupling table") {
  const fs::path dir = scratch("honeycomb");
  REQUIRE(sh("run honeycomb-couplings --out " + dir.string()).code == 0);
  const fs::path run = only_run_dir(dir, "honeycomb-couplings");
  const auto record = nlohmann::json::parse(slurp(run / "record.json"));
  CHECK(record["results"]["classes"]["J1_khz"].size() == 4);
  CHECK(record["results"]["classes"]["J2_khz"].size() == 2);
  CHECK(record["results"]["classes"]["J_nnn_khz"].size() == 6);
  CHECK(fs::exists(run / "couplings.csv"));
}

TEST_CASE("sweeps") {
  const fs::path dir = scratch("sweep");
  const Outcome empty = sh("sweep distance --values \"\" --out " + dir.string());
  CHECK(empty.code == 0);
  std::vector<fs::path> sums;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().filename() == "summary.csv") sums.push_back(e.path());
  }
  REQUIRE(sums.size() == 1);
  CHECK(slurp(sums.front()) == "value,U_mhz,period_us,direction,exit_code,status,run_dir\n");

  // Distance points: the interaction follows the R^-6 law.
  RunOptions o;
  o.out_dir = (dir / "d").string();
  o.t_end = 5.0;
  const SweepResult d =
      run_sweep("distance", {4.3247, 4.3447, 4.3647}, "nnn-triangle-sweep", ParamMap{}, o);
  REQUIRE(d.rows.size() == 3);
  const double u[3] = {20.561, 20.0, 19.456};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(d.rows[static_cast<std::size_t>(k)]["U_mhz"].get<double>() - u[k]) / u[k] < 1e-3);
  }

  // Phase points: reversing the flux reverses the circulation.
  const Outcome ph = sh("sweep phase --values pi/2,-pi/2 --scenario triangle-effective --out " +
                        (dir / "p").string());
  CHECK(ph.code == 0);
  CHECK(ph.output.find("\"direction\":1") != std::string::npos);
  CHECK(ph.output.find("\"direction\":-1") != std::string::npos);

  // A failing point is recorded and the sweep continues.
  RunOptions f;
  f.out_dir = (dir / "f").string();
  const SweepResult bad = run_sweep("R", {-1.0, 2.96}, "triangle-effective", ParamMap{}, f);
  REQUIRE(bad.rows.size() == 2);
  CHECK(bad.rows[0]["exit_code"] != 0);
  CHECK(bad.rows[1]["exit_code"] == 0);
}
