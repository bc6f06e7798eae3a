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

// scenarios.hpp: named runs, coupling tables and parameter sweeps behind
// the chiralsim command line.
//
// run_scenario is a pure entry point: it reads only its arguments and
// writes only into its own output directory, so independent runs may
// proceed in parallel.

#pragma once

#include "chiral/config.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/hamiltonians.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chiral {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitPrecondition = 4;

const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);
std::string scenario_description(const std::string& name);
// Complete parameter set of a scenario; every accepted key appears here.
ParamMap scenario_defaults(const std::string& name);

// Config builders from flat parameters.
ModelConfig triangle_model(const ParamMap& p);
ModelConfig two_atom_model(const ParamMap& p);
HoneycombDrives honeycomb_drives(const ParamMap& p);

// Nearest-pair interaction in MHz implied by the parameters: the explicit
// U when positive, otherwise Delta * (R_resonant / R)^6 when R_resonant is
// positive, otherwise the R^-6 law with C6.
double pair_interaction(const ParamMap& p);

// Chiral period 1/(sqrt(3) |J|) of the ring triangle in µs, using the mean
// |J| over the three bonds.
double chiral_period(const ModelConfig& config);

struct RunOptions {
  std::string out_dir = "out";
  bool write_files = true;
  std::optional<double> t_end;
  std::optional<double> dt;
  bool check_positivity = true;
  unsigned seed = 0;  // reserved: the dynamics are deterministic
};

struct RunResult {
  nlohmann::json record;
  TimeSeries series;
  int exit_code = kExitOk;
  std::string run_dir;
};

// Throws ParseError / ConfigError for bad parameters and PreconditionError,
// CostGuardError or SingularityError when a run cannot be set up.
RunResult run_scenario(const std::string& name, const ParamMap& params, const RunOptions& options);

// CSV with header t_us,P_<state>...,trace,min_eig.
void write_series_csv(const TimeSeries& series, const std::string& path);
TimeSeries read_series_csv(const std::string& path);

// Human-readable coupling table; singular bonds are reported inline.
nlohmann::json coupling_table(const std::string& scenario, const ParamMap& params);
void print_coupling_table(const nlohmann::json& table, std::ostream& out);

struct SweepResult {
  std::vector<nlohmann::json> rows;
  std::string summary_path;
  int exit_code = kExitOk;
};

// parameter is "distance", "phase", "amplitude" or an explicit config key.
// A failing point is recorded in its row and the sweep continues.
SweepResult run_sweep(const std::string& parameter, const std::vector<double>& values,
                      const std::string& scenario, const ParamMap& params,
                      const RunOptions& options);
std::string sweep_key(const std::string& parameter);

// Fresh collision-free directory out_dir/<label>/<timestamp>.
std::string make_run_dir(const std::string& out_dir, const std::string& label);

}  // namespace chiral
