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

// chiralsim: command-line front end.
//
//   chiralsim list
//   chiralsim run [scenario] [--config FILE] [--set k=v]... [--out DIR]
//   chiralsim couplings [scenario] [--config FILE] [--set k=v]...
//   chiralsim sweep PARAM --values v1,v2,... [--scenario NAME]
//
// Exit codes: 0 success, 2 config error, 3 invariant failure,
// 4 precondition or cost-guard rejection.

#include "chiral/scenarios.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace chiral;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::optional<double> t_end;
  std::optional<double> dt;
  bool no_positivity = false;
  unsigned seed = 0;
};

void add_common(CLI::App* app, CommonArgs& a, bool dynamics) {
  app->add_option("--config", a.config_path, "parameter file (key = value text, JSON, or a run record)");
  app->add_option("--set", a.overrides, "override one parameter, key=value")->allow_extra_args(false);
  if (!dynamics) return;
  app->add_option("--out", a.out_dir, "output root directory");
  app->add_option("--t-end", a.t_end, "final time in µs");
  app->add_option("--dt", a.dt, "integration step in µs");
  app->add_flag("--no-positivity-check", a.no_positivity, "skip the per-sample eigenvalue check");
  app->add_option("--seed", a.seed, "reserved; the dynamics are deterministic");
}

ParamMap collect_params(const CommonArgs& a) {
  ParamMap p;
  if (!a.config_path.empty()) p = load_params(a.config_path);
  for (const std::string& s : a.overrides) p.merge(parse_override(s), "--set", true);
  return p;
}

RunOptions run_options(const CommonArgs& a) {
  RunOptions o;
  o.out_dir = a.out_dir;
  o.t_end = a.t_end;
  o.dt = a.dt;
  o.check_positivity = !a.no_positivity;
  o.seed = a.seed;
  return o;
}

std::string resolve_scenario(const std::string& given, const CommonArgs& a,
                             const std::string& fallback) {
  std::string name = given;
  if (name.empty() && !a.config_path.empty()) name = record_scenario(a.config_path);
  if (name.empty()) name = fallback;
  if (!is_scenario(name)) throw ConfigError("unknown scenario '" + name + "'");
  return name;
}

int report_run(const RunResult& r) {
  const auto& inv = r.record["invariants"];
  std::cout << "scenario: " << r.record["scenario"].get<std::string>() << '\n';
  if (!r.run_dir.empty()) std::cout << "output:   " << r.run_dir << '\n';
  std::cout << "results:  " << r.record["results"].dump() << '\n';
  std::cout << "invariants: " << (inv["passed"].get<bool>() ? "passed" : "FAILED") << '\n';
  return r.exit_code;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Driven Rydberg-atom ring simulator"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list scenarios");

  CommonArgs run_args;
  std::string run_name;
  auto* run = app.add_subcommand("run", "run a scenario");
  run->add_option("scenario", run_name, "scenario name");
  add_common(run, run_args, true);

  CommonArgs cpl_args;
  std::string cpl_name;
  auto* cpl = app.add_subcommand("couplings", "print the coupling table of a configuration");
  cpl->add_option("scenario", cpl_name, "scenario whose defaults apply");
  add_common(cpl, cpl_args, false);

  CommonArgs sw_args;
  std::string sw_param;
  std::vector<std::string> sw_values;
  std::string sw_name;
  auto* sweep = app.add_subcommand("sweep", "run a scenario for a list of parameter values");
  sweep->add_option("parameter", sw_param, "distance, phase, amplitude or a config key")->required();
  sweep->add_option("--values", sw_values, "comma-separated values")->delimiter(',')->expected(0, -1);
  sweep->add_option("--scenario", sw_name, "scenario to sweep");
  add_common(sweep, sw_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*list) {
      for (const std::string& n : scenario_names()) {
        std::cout << n << "  " << scenario_description(n) << '\n';
      }
      return kExitOk;
    }
    if (*run) {
      const std::string name = resolve_scenario(run_name, run_args, "triangle-full");
      return report_run(run_scenario(name, collect_params(run_args), run_options(run_args)));
    }
    if (*cpl) {
      const std::string name = resolve_scenario(cpl_name, cpl_args, "triangle-full");
      print_coupling_table(coupling_table(name, collect_params(cpl_args)), std::cout);
      return kExitOk;
    }
    if (*sweep) {
      const std::string fallback = sweep_key(sw_param) == "R" ? "nnn-triangle-sweep" : "triangle-full";
      const std::string name = resolve_scenario(sw_name, sw_args, fallback);
      std::vector<double> values;
      for (const std::string& v : sw_values) {
        if (v.empty()) continue;
        try {
          values.push_back(parse_number(v));
        } catch (const std::invalid_argument& e) {
          throw ParseError("--values", 1, 1, e.what());
        }
      }
      const SweepResult r =
          run_sweep(sw_param, values, name, collect_params(sw_args), run_options(sw_args));
      for (const auto& row : r.rows) std::cout << row.dump() << '\n';
      if (!r.summary_path.empty()) std::cout << "summary: " << r.summary_path << '\n';
      return r.exit_code;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const CostGuardError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const SingularityError& e) {
    std::cerr << "singular: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
