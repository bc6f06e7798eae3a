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

#include "chiral/analysis.hpp"
#include "chiral/dissipation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace chiral {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ScenarioInfo {
  const char* name;
  const char* description;
};

const ScenarioInfo kScenarios[] = {
    {"triangle-full", "three-atom ring, lab-frame master equation"},
    {"triangle-effective", "three-atom ring, effective ground-manifold master equation"},
    {"triangle-rotated", "three-atom ring, rotated-frame master equation"},
    {"triangle-unitary", "three-atom ring, closed-system state-vector evolution"},
    {"flux-reversed", "three-atom ring with every drive phase negated"},
    {"honeycomb-couplings", "hopping table of the six-site hexagon"},
    {"nnn-triangle-sweep", "next-nearest-neighbour triangle at spacing R"},
    {"coherence-two-atom", "two-atom flip-flop with decay and dephasing"},
};

const char* const kPiHalf = "1.5707963267948966";

ParamMap drive_block(double o1, double o2, double o3, double d1, double d2, double d3) {
  ParamMap p;
  p.set("omega.1", o1);
  p.set("omega.2", o2);
  p.set("omega.3", o3);
  p.set("alpha.1", kPiHalf);
  p.set("alpha.2", 0.0);
  p.set("alpha.3", 0.0);
  p.set("beta.1", 0.0);
  p.set("beta.2", 0.0);
  p.set("beta.3", 0.0);
  p.set("delta.1", d1);
  p.set("delta.2", d2);
  p.set("delta.3", d3);
  return p;
}

void set_common_run_keys(ParamMap& p, double t_end, double sample_dt, const std::string& initial) {
  p.set("t_end", t_end);
  p.set("sample_dt", sample_dt);
  p.set("dt", 0.0);
  p.set("dt_refine", 1.0);
  p.set("initial", initial);
  p.set("positivity_stride", 1.0);
}

ParamMap triangle_defaults() {
  ParamMap p = drive_block(0.2, 0.2, 0.4, -4.0, 4.0, 8.0);
  p.set("omega_p", 4.0);
  p.set("Delta", 200.0);
  p.set("gamma", 0.00692);
  p.set("gamma_dephase", 0.0);
  p.set("C6", 135.0);
  p.set("R", 2.96);
  p.set("R_resonant", 2.96);
  p.set("U", 0.0);
  p.set("stark_compensation", "true");
  p.set("threshold", 0.5);
  set_common_run_keys(p, 0.0, 0.1, "egg");
  return p;
}

std::string state_of(const ParamMap& p, int n_atoms) {
  const std::string s = p.text("initial");
  if (static_cast<int>(s.size()) != n_atoms) {
    throw ConfigError("initial state '" + s + "' must name " + std::to_string(n_atoms) +
                      " atoms");
  }
  state_index(s);
  return s;
}

LocalDrive drive_from(const ParamMap& p, int k) {
  const std::string s = std::to_string(k);
  LocalDrive d;
  d.amplitude = p.number("omega." + s);
  d.alpha = p.number("alpha." + s);
  d.beta = p.number("beta." + s);
  d.detuning = p.number("delta." + s);
  return d;
}

json number_or_text(const std::string& text) {
  try {
    return parse_number(text);
  } catch (const std::invalid_argument&) {
  }
  if (text == "true") return true;
  if (text == "false") return false;
  return text;
}

json snapshot(const ParamMap& p) {
  json out = json::object();
  for (const auto& [k, v] : p.entries()) out[k] = number_or_text(v);
  return out;
}

json invariants_json(const InvariantReport& r) {
  return {{"max_trace_error", r.max_trace_error},
          {"max_hermitian_defect", r.max_hermitian_defect},
          {"min_eigenvalue", std::isfinite(r.min_eigenvalue) ? json(r.min_eigenvalue) : json()},
          {"min_population", r.min_population},
          {"max_population", r.max_population},
          {"trace_ok", r.trace_ok},
          {"hermitian_ok", r.hermitian_ok},
          {"positivity_ok", r.positivity_ok},
          {"populations_ok", r.populations_ok},
          {"passed", r.ok()}};
}

json chirality_json(const ChiralityReport& c, const std::array<std::string, 3>& order) {
  json peaks = json::object();
  for (std::size_t s = 0; s < 3; ++s) {
    peaks[order[s]] = std::isnan(c.peak_times[s]) ? json() : json(c.peak_times[s]);
  }
  return {{"direction", c.direction}, {"peak_times_us", peaks}, {"diagnostic", c.diagnostic}};
}

std::array<std::string, 3> site_order_from(const std::string& initial) {
  const std::array<std::string, 3> ring = {"egg", "geg", "gge"};
  for (std::size_t s = 0; s < 3; ++s) {
    if (ring[s] == initial) return {ring[s], ring[(s + 1) % 3], ring[(s + 2) % 3]};
  }
  return ring;
}

json triangle_couplings_json(const ModelConfig& c) {
  json bonds = json::array();
  const double op = c.global_drives[0].amplitude;
  const char* names[3] = {"1-2", "2-3", "3-1"};
  for (int j = 0; j < 3; ++j) {
    const LocalDrive& d = c.local_drives[static_cast<std::size_t>((j + 1) % 3)];
    json b = {{"bond", names[j]}, {"drive", (j + 1) % 3 + 1}};
    try {
      const cplx v = coupling_J(j + 1, d.amplitude, d.detuning, op, d.alpha, d.beta);
      b["abs_khz"] = std::abs(v) * 1000.0;
      b["phase_rad"] = std::arg(v);
    } catch (const SingularityError& e) {
      b["error"] = e.what();
    }
    bonds.push_back(b);
  }
  return bonds;
}

json rates_json(const ModelConfig& c) {
  json rates = json::array();
  const double op = c.global_drives[0].amplitude;
  for (std::size_t k = 0; k < c.local_drives.size(); ++k) {
    const LocalDrive& d = c.local_drives[k];
    json r = {{"drive", k + 1}};
    try {
      const EffectiveRates e = effective_rates(static_cast<int>(k) + 1, d.amplitude, d.detuning,
                                               op, c.decay.gamma, d.alpha, d.beta);
      r["gamma1"] = e.gamma1;
      r["gamma2"] = e.gamma2;
      r["gamma3"] = e.gamma3;
      r["chi_re"] = e.chi.real();
      r["chi_im"] = e.chi.imag();
    } catch (const SingularityError& err) {
      r["error"] = err.what();
    }
    rates.push_back(r);
  }
  return rates;
}

json honeycomb_json(const ModelConfig& c) {
  json bonds = json::array();
  for (const CouplingEntry& e : honeycomb_couplings(c)) {
    json b = {{"bond", e.bond}, {"drive", e.drive}, {"kind", e.nearest ? "nearest" : "next-nearest"}};
    if (e.error.empty()) {
      b["abs_khz"] = std::abs(e.j_mhz) * 1000.0;
      b["phase_rad"] = std::arg(e.j_mhz);
    } else {
      b["error"] = e.error;
    }
    bonds.push_back(b);
  }
  // Bond classes: J1 nearest bonds bridged by drives 1 and 2, J2 nearest
  // bonds bridged by drive 3, J_nnn all next-nearest bonds.
  auto class_values = [&](bool nearest, bool third) {
    json vals = json::array();
    for (const auto& b : bonds) {
      if (!b.contains("abs_khz")) continue;
      if ((b["kind"] == "nearest") != nearest) continue;
      if (nearest && ((b["drive"] == 3) != third)) continue;
      vals.push_back(b["abs_khz"]);
    }
    return vals;
  };
  const json classes = {{"J1_khz", class_values(true, false)},
                        {"J2_khz", class_values(true, true)},
                        {"J_nnn_khz", class_values(false, false)}};
  return {{"bonds", bonds}, {"classes", classes}};
}

// Default step is the stability bound divided by this factor.
double refinement(const ParamMap& p) {
  const double r = p.has("dt_refine") ? p.number("dt_refine") : 1.0;
  if (!(r >= 1.0)) throw ConfigError("dt_refine must be at least 1");
  return r;
}

void apply_run_options(ParamMap& p, const RunOptions& o) {
  if (o.t_end) p.set("t_end", *o.t_end);
  if (o.dt) p.set("dt", *o.dt);
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : kScenarios) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

bool is_scenario(const std::string& name) {
  for (const auto& s : kScenarios) {
    if (name == s.name) return true;
  }
  return false;
}

std::string scenario_description(const std::string& name) {
  for (const auto& s : kScenarios) {
    if (name == s.name) return s.description;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

ParamMap scenario_defaults(const std::string& name) {
  if (name == "triangle-effective") return triangle_defaults();
  if (name == "triangle-full" || name == "flux-reversed") {
    ParamMap p = triangle_defaults();
    p.set("dt_refine", 4.0);
    return p;
  }
  if (name == "triangle-rotated") {
    ParamMap p = triangle_defaults();
    p.set("dt_refine", 8.0);
    return p;
  }
  if (name == "triangle-unitary") {
    ParamMap p = triangle_defaults();
    p.set("gamma", 0.0);
    p.set("frame", "full");
    p.set("dt_refine", 6.0);
    return p;
  }
  if (name == "nnn-triangle-sweep") {
    ParamMap p = drive_block(0.03, 0.03, 0.0373, 1.0, -1.0, 1.8);
    p.set("omega_p", 2.9);
    p.set("Delta", 20.0);
    p.set("gamma", 0.0);
    p.set("gamma_dephase", 0.0);
    p.set("C6", 135.0);
    p.set("R", 4.3447);
    p.set("R_resonant", 4.3447);
    p.set("U", 0.0);
    p.set("stark_compensation", "true");
    p.set("threshold", 0.5);
    set_common_run_keys(p, 3000.0, 1.0, "egg");
    p.set("dt_refine", 3.0);
    return p;
  }
  if (name == "honeycomb-couplings") {
    ParamMap p = drive_block(0.03, 0.03, 0.0373, 1.0, -1.0, 1.8);
    p.set("omega_p", 0.95);
    p.set("Delta", 540.0);
    p.set("omega_p2", 2.9);
    p.set("Delta2", 20.0);
    p.set("R", 2.5119);
    return p;
  }
  if (name == "coherence-two-atom") {
    ParamMap p;
    p.set("omega.2", 0.0373);
    p.set("alpha.2", 0.0);
    p.set("beta.2", 0.0);
    p.set("delta.2", 1.0);
    p.set("omega_p", 2.9);
    p.set("Delta", 20.0);
    p.set("gamma", 0.00692);
    p.set("gamma_dephase", 0.02);
    p.set("C6", 135.0);
    p.set("R", 4.3447);
    p.set("R_resonant", 4.3447);
    p.set("U", 0.0);
    p.set("frame", "two_atom_static");
    set_common_run_keys(p, 300000.0, 10.0, "eg");
    p.set("dt_refine", 4.0);
    p.set("positivity_stride", 10.0);
    return p;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

double pair_interaction(const ParamMap& p) {
  if (p.has("U") && p.number("U") > 0.0) return p.number("U");
  const double r = p.number("R");
  if (!(r > 0.0)) throw ConfigError("spacing R must be positive");
  if (p.has("R_resonant") && p.number("R_resonant") > 0.0) {
    return p.number("Delta") * std::pow(p.number("R_resonant") / r, 6);
  }
  return vdw_interaction(r, p.number("C6"));
}

ModelConfig triangle_model(const ParamMap& p) {
  ModelConfig c;
  c.n_atoms = 3;
  for (int k = 1; k <= 3; ++k) c.local_drives.push_back(drive_from(p, k));
  c.global_drives = {{p.number("omega_p"), p.number("Delta")}};
  const double u = pair_interaction(p);
  c.geometry = Geometry::uniform(3, u);
  c.geometry.positions = triangle_positions(p.number("R"));
  c.geometry.c6 = u * std::pow(p.number("R"), 6) / 1000.0;
  c.decay = {p.number("gamma"), p.number("gamma_dephase")};
  c.site_lasers = ring_assignment(3);
  c.stark_compensation = p.has("stark_compensation") && p.flag("stark_compensation");
  c.validate();
  return c;
}

ModelConfig two_atom_model(const ParamMap& p) {
  ModelConfig c;
  c.n_atoms = 2;
  c.local_drives = {drive_from(p, 2)};
  c.global_drives = {{p.number("omega_p"), p.number("Delta")}};
  const double u = pair_interaction(p);
  c.geometry = Geometry::uniform(2, u);
  c.geometry.positions = {Eigen::Vector3d::Zero(), Eigen::Vector3d(p.number("R"), 0.0, 0.0)};
  c.geometry.c6 = u * std::pow(p.number("R"), 6) / 1000.0;
  c.decay = {p.number("gamma"), p.number("gamma_dephase")};
  // The first atom sees the beta component, the second the alpha component.
  c.site_lasers = {{-1, 0}, {0, -1}};
  c.validate();
  return c;
}

HoneycombDrives honeycomb_drives(const ParamMap& p) {
  HoneycombDrives d;
  for (int k = 1; k <= 3; ++k) d.local[static_cast<std::size_t>(k - 1)] = drive_from(p, k);
  d.nn = {p.number("omega_p"), p.number("Delta")};
  d.nnn = {p.number("omega_p2"), p.number("Delta2")};
  return d;
}

double chiral_period(const ModelConfig& config) {
  const EffectiveModel m = effective_model(config);
  double mean = 0.0;
  for (const cplx& j : m.hoppings) mean += std::abs(j) / 3.0;
  if (!(mean > 0.0)) throw PreconditionError("all hoppings vanish: no chiral period");
  return 1.0 / (std::sqrt(3.0) * mean);
}

void write_series_csv(const TimeSeries& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fputs("t_us", f);
  for (const std::string& l : s.labels) std::fprintf(f, ",P_%s", l.c_str());
  std::fputs(",trace,min_eig\n", f);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::fprintf(f, "%.12g", s.times[i]);
    for (const auto& curve : s.populations) std::fprintf(f, ",%.12g", curve[i]);
    std::fprintf(f, ",%.12g", s.trace[i]);
    if (std::isnan(s.min_eig[i])) {
      std::fputs(",nan\n", f);
    } else {
      std::fprintf(f, ",%.12g\n", s.min_eig[i]);
    }
  }
  std::fclose(f);
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 3 || cols.front() != "t_us" || cols[cols.size() - 2] != "trace" ||
      cols.back() != "min_eig") {
    throw std::runtime_error(path + ": unexpected header");
  }
  TimeSeries s;
  for (std::size_t k = 1; k + 2 < cols.size(); ++k) {
    if (cols[k].rfind("P_", 0) != 0) throw std::runtime_error(path + ": bad column " + cols[k]);
    s.labels.push_back(cols[k].substr(2));
  }
  s.populations.resize(s.labels.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c;
    std::vector<double> v;
    while (std::getline(ss, c, ',')) {
      v.push_back(c == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(c));
    }
    if (v.size() != cols.size()) throw std::runtime_error(path + ": ragged row");
    s.times.push_back(v[0]);
    for (std::size_t k = 0; k < s.labels.size(); ++k) s.populations[k].push_back(v[k + 1]);
    s.trace.push_back(v[v.size() - 2]);
    s.min_eig.push_back(v.back());
    s.hermitian_defect.push_back(0.0);
  }
  return s;
}

std::string make_run_dir(const std::string& out_dir, const std::string& label) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
                          now.time_since_epoch()).count() % 1000000;
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y%m%dT%H%M%S") << '-' << std::setw(6) << std::setfill('0')
        << micros;
  const fs::path base = fs::path(out_dir) / label;
  fs::create_directories(base);
  for (int n = 0;; ++n) {
    fs::path dir = base / (stamp.str() + (n ? "-" + std::to_string(n) : std::string()));
    if (fs::create_directory(dir)) return dir.string();
  }
}

RunResult run_scenario(const std::string& name, const ParamMap& params, const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  ParamMap p = scenario_defaults(name);
  p.merge(params, "config");
  apply_run_options(p, options);

  RunResult result;
  json results = json::object();
  TimeSeries& series = result.series;
  bool has_series = true;
  json table;

  IntegrationOptions iopt;
  iopt.check_positivity = options.check_positivity;
  if (p.has("positivity_stride")) {
    iopt.positivity_stride = static_cast<std::size_t>(std::max(1.0, p.number("positivity_stride")));
  }

  const bool triangle = name.rfind("triangle-", 0) == 0 || name == "flux-reversed" ||
                        name == "nnn-triangle-sweep";
  if (triangle) {
    ModelConfig c = triangle_model(p);
    if (name == "flux-reversed") {
      for (LocalDrive& d : c.local_drives) {
        d.alpha = -d.alpha;
        d.beta = -d.beta;
      }
    }
    const std::string initial = state_of(p, 3);
    if (!(p.number("t_end") > 0.0)) p.set("t_end", 1.5 * chiral_period(c));
    const double sample_dt = p.number("sample_dt");

    Frame frame = Frame::full;
    if (name == "triangle-effective") frame = Frame::effective;
    if (name == "triangle-rotated") frame = Frame::rotated;
    if (name == "triangle-unitary") frame = frame_from_string(p.text("frame"));
    const MasterGenerator gen = make_generator(c, frame);
    if (!(p.number("dt") > 0.0)) p.set("dt", gen.dt_bound() / refinement(p));
    const TimeGrid grid = make_grid(p.number("t_end"), sample_dt, p.number("dt"));
    p.set("t_end", grid.t_end);

    const bool closed = c.decay.gamma == 0.0 && c.decay.gamma_dephase == 0.0;
    if (name == "triangle-unitary" || (name == "nnn-triangle-sweep" && closed)) {
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(27);
      psi(static_cast<Eigen::Index>(state_index(initial))) = 1.0;
      series = evolve_unitary(c, psi, grid, frame, iopt);
      double drift = 0.0;
      for (double n : series.trace) drift = std::max(drift, std::abs(n - 1.0));
      results["norm_drift"] = drift;
      results["evolution"] = "state vector";
    } else {
      series = integrate_master(gen, DensityMatrix::pure(state_index(initial), 27), grid, iopt);
      results["evolution"] = "density matrix";
    }
    results["frame"] = to_string(frame);
    results["dt_us"] = grid.dt;
    results["steps"] = grid.n_steps();
    results["U_mhz"] = c.geometry.interactions(0, 1);
    results["flux_rad"] = synthetic_flux(c.local_drives);
    results["couplings"] = triangle_couplings_json(c);
    if (c.stark_compensation) results["light_shift_compensation_mhz"] = ground_light_shifts(c);
    const auto order = site_order_from(initial);
    results["chirality"] =
        chirality_json(detect_chirality(series, order, p.number("threshold")), order);
    try {
      results["period_us"] = oscillation_period(series.times, series.curve(initial));
    } catch (const std::domain_error& e) {
      results["period_us"] = nullptr;
      results["period_diagnostic"] = e.what();
    }
  } else if (name == "coherence-two-atom") {
    const ModelConfig c = two_atom_model(p);
    const std::string initial = state_of(p, 2);
    const Frame frame = frame_from_string(p.text("frame"));
    const double t_end = p.number("t_end");
    const double sample_dt = p.number("sample_dt");
    const DensityMatrix rho0 = DensityMatrix::pure(state_index(initial), 9);
    if (frame == Frame::two_atom_static) {
      const Operator h = build_two_atom_static_hamiltonian(c);
      const std::size_t n = static_cast<std::size_t>(std::ceil(t_end / sample_dt - 1e-9));
      std::vector<double> times(n + 1);
      for (std::size_t k = 0; k <= n; ++k) times[k] = sample_dt * static_cast<double>(k);
      p.set("t_end", times.back());
      series = propagate_spectral(h, build_jump_ops(c), rho0, times, iopt);
      results["propagator"] = "spectral";
    } else if (frame == Frame::two_atom) {
      const MasterGenerator gen = make_generator(c, frame);
      if (!(p.number("dt") > 0.0)) p.set("dt", gen.dt_bound() / refinement(p));
      const TimeGrid grid = make_grid(t_end, sample_dt, p.number("dt"));
      series = integrate_master(gen, rho0, grid, iopt);
      results["propagator"] = "fixed-step";
    } else {
      throw ConfigError("coherence run needs frame two_atom_static or two_atom");
    }
    results["frame"] = to_string(frame);
    results["U_mhz"] = c.geometry.interactions(0, 1);
    const LocalDrive& d = c.local_drives[0];
    results["flip_flop_khz"] =
        std::abs(coupling_J(1, d.amplitude, d.detuning, c.global_drives[0].amplitude, d.alpha,
                            d.beta)) * 1000.0;
    try {
      const CoherenceReport rep = coherence_time(series.curve(initial), series.times);
      results["coherence"] = {{"t_1e_ms", rep.bounded ? json(rep.t_1e_ms) : json()},
                              {"n_osc", rep.bounded ? json(rep.n_osc) : json()},
                              {"period_ms", rep.period_ms},
                              {"amplitude", rep.amplitude},
                              {"offset", rep.offset},
                              {"fit_residual", rep.fit_residual},
                              {"n_maxima", rep.n_maxima},
                              {"bounded", rep.bounded},
                              {"diagnostic", rep.diagnostic}};
    } catch (const std::domain_error& e) {
      results["coherence"] = {{"bounded", false}, {"diagnostic", e.what()}};
    }
  } else if (name == "honeycomb-couplings") {
    has_series = false;
    const ModelConfig c = build_honeycomb_config(p.number("R"), honeycomb_drives(p));
    table = honeycomb_json(c);
    results = table;
    results["flux_rad"] = synthetic_flux(c.local_drives);
    results["U_nn_mhz"] = c.geometry.interactions(0, 4);
    results["U_nnn_mhz"] = c.geometry.interactions(0, 1);
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }

  json inv;
  if (has_series) {
    const InvariantReport r = check_invariants(series);
    inv = invariants_json(r);
    if (!r.ok()) result.exit_code = kExitInvariant;
  } else {
    inv = {{"passed", true}, {"note", "no time evolution"}};
  }

  json outputs = json::object();
  if (options.write_files) {
    result.run_dir = make_run_dir(options.out_dir, name);
    const fs::path dir(result.run_dir);
    if (has_series) {
      const std::string csv = (dir / "series.csv").string();
      write_series_csv(series, csv);
      outputs["series_csv"] = csv;
    } else {
      const std::string csv = (dir / "couplings.csv").string();
      std::ofstream out(csv);
      out << "bond,drive,kind,abs_khz,phase_rad\n";
      for (const auto& b : table["bonds"]) {
        out << b["bond"].get<std::string>() << ',' << b["drive"].get<int>() << ','
            << b["kind"].get<std::string>() << ','
            << (b.contains("abs_khz") ? std::to_string(b["abs_khz"].get<double>()) : "nan") << ','
            << (b.contains("phase_rad") ? std::to_string(b["phase_rad"].get<double>()) : "nan")
            << '\n';
      }
      outputs["couplings_csv"] = csv;
    }
    outputs["record_json"] = (dir / "record.json").string();
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  result.record = {{"scenario", name},
                   {"description", scenario_description(name)},
                   {"config", snapshot(p)},
                   {"outputs", outputs},
                   {"wall_clock_s", wall},
                   {"invariants", inv},
                   {"results", results},
                   {"exit_code", result.exit_code}};
  if (options.write_files) {
    std::ofstream out(outputs["record_json"].get<std::string>());
    out << std::setw(2) << result.record << '\n';
  }
  return result;
}

json coupling_table(const std::string& scenario, const ParamMap& params) {
  ParamMap p = scenario_defaults(scenario);
  p.merge(params, "config");
  if (scenario == "honeycomb-couplings") {
    const ModelConfig c = build_honeycomb_config(p.number("R"), honeycomb_drives(p));
    json t = honeycomb_json(c);
    t["kind"] = "honeycomb";
    t["flux_rad"] = synthetic_flux(c.local_drives);
    return t;
  }
  if (scenario == "coherence-two-atom") {
    const ModelConfig c = two_atom_model(p);
    const LocalDrive& d = c.local_drives[0];
    json b = {{"bond", "1-2"}, {"drive", 2}};
    try {
      const cplx v = coupling_J(1, d.amplitude, d.detuning, c.global_drives[0].amplitude,
                                d.alpha, d.beta);
      b["abs_khz"] = std::abs(v) * 1000.0;
      b["phase_rad"] = std::arg(v);
    } catch (const SingularityError& e) {
      b["error"] = e.what();
    }
    json rates = rates_json(c);
    rates[0]["drive"] = 2;
    return {{"kind", "pair"}, {"bonds", json::array({b})}, {"rates", rates}};
  }
  const ModelConfig c = triangle_model(p);
  json t = {{"kind", "triangle"},
            {"bonds", triangle_couplings_json(c)},
            {"flux_rad", synthetic_flux(c.local_drives)},
            {"rates", rates_json(c)}};
  try {
    const auto s = stark_shifts(c);
    t["stark_mhz"] = {{"egg", s[0]}, {"geg", s[1]}, {"gge", s[2]}};
  } catch (const SingularityError& e) {
    t["stark_error"] = e.what();
  }
  try {
    t["light_shift_mhz"] = ground_light_shifts(c);
  } catch (const SingularityError& e) {
    t["light_shift_error"] = e.what();
  }
  return t;
}

void print_coupling_table(const json& t, std::ostream& out) {
  out << std::fixed;
  out << "bond     drive  kind           |J| (kHz)    phase (rad)\n";
  for (const auto& b : t["bonds"]) {
    out << std::left << std::setw(9) << b["bond"].get<std::string>() << std::setw(7)
        << b["drive"].get<int>() << std::setw(15)
        << (b.contains("kind") ? b["kind"].get<std::string>() : std::string("-"));
    if (b.contains("error")) {
      out << "singular: " << b["error"].get<std::string>() << '\n';
    } else {
      out << std::right << std::setprecision(5) << std::setw(10) << b["abs_khz"].get<double>()
          << std::setw(15) << std::setprecision(6) << b["phase_rad"].get<double>() << std::left
          << '\n';
    }
  }
  if (t.contains("flux_rad")) {
    out << "flux (rad): " << std::setprecision(6) << t["flux_rad"].get<double>() << '\n';
  }
  if (t.contains("stark_mhz")) {
    out << "Stark shifts (MHz): egg " << std::setprecision(6) << t["stark_mhz"]["egg"].get<double>()
        << ", geg " << t["stark_mhz"]["geg"].get<double>() << ", gge "
        << t["stark_mhz"]["gge"].get<double>() << '\n';
  }
  if (t.contains("stark_error")) out << "Stark shifts: " << t["stark_error"].get<std::string>() << '\n';
  if (t.contains("rates")) {
    out << "drive  Gamma1        Gamma2        Gamma3   (sqrt(rad/us))\n";
    for (const auto& r : t["rates"]) {
      out << std::left << std::setw(7) << r["drive"].get<int>();
      if (r.contains("error")) {
        out << "singular: " << r["error"].get<std::string>() << '\n';
        continue;
      }
      out << std::scientific << std::setprecision(6) << r["gamma1"].get<double>() << "  "
          << r["gamma2"].get<double>() << "  " << r["gamma3"].get<double>() << std::fixed << '\n';
    }
  }
}

std::string sweep_key(const std::string& parameter) {
  if (parameter == "distance") return "R";
  if (parameter == "phase") return "alpha.1";
  if (parameter == "amplitude") return "omega.1";
  return parameter;
}

SweepResult run_sweep(const std::string& parameter, const std::vector<double>& values,
                      const std::string& scenario, const ParamMap& params,
                      const RunOptions& options) {
  const std::string key = sweep_key(parameter);
  const ParamMap defaults = scenario_defaults(scenario);
  if (!defaults.has(key)) {
    throw ConfigError("scenario '" + scenario + "' has no parameter '" + key + "'");
  }
  SweepResult sweep;
  for (double v : values) {
    ParamMap p = params;
    p.set(key, v);
    json row = {{"value", v}, {"key", key}};
    try {
      ParamMap resolved = defaults;
      resolved.merge(p, "sweep");
      row["U_mhz"] = resolved.has("Delta") && resolved.has("R") ? json(pair_interaction(resolved))
                                                                 : json();
      RunResult r = run_scenario(scenario, p, options);
      row["exit_code"] = r.exit_code;
      row["status"] = r.exit_code == kExitOk ? "ok" : "invariant failure";
      row["run_dir"] = r.run_dir;
      const json& res = r.record["results"];
      row["period_us"] = res.contains("period_us") ? res["period_us"] : json();
      row["direction"] = res.contains("chirality") ? res["chirality"]["direction"] : json();
      if (r.exit_code != kExitOk && sweep.exit_code == kExitOk) sweep.exit_code = r.exit_code;
    } catch (const std::exception& e) {
      row["exit_code"] = kExitPrecondition;
      row["status"] = std::string("failed: ") + e.what();
      if (sweep.exit_code == kExitOk) sweep.exit_code = kExitPrecondition;
    }
    sweep.rows.push_back(row);
  }

  if (options.write_files) {
    const std::string dir = make_run_dir(options.out_dir, "sweep-" + parameter);
    sweep.summary_path = (fs::path(dir) / "summary.csv").string();
    std::ofstream out(sweep.summary_path);
    out << "value,U_mhz,period_us,direction,exit_code,status,run_dir\n";
    auto field = [](const json& j) {
      if (j.is_null()) return std::string("nan");
      if (j.is_number_float()) {
        std::ostringstream os;
        os << std::setprecision(12) << j.get<double>();
        return os.str();
      }
      if (j.is_string()) return j.get<std::string>();
      return j.dump();
    };
    for (const json& row : sweep.rows) {
      std::string status = row["status"].get<std::string>();
      for (char& ch : status) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      out << field(row["value"]) << ',' << field(row.value("U_mhz", json())) << ','
          << field(row.value("period_us", json())) << ',' << field(row.value("direction", json()))
          << ',' << row["exit_code"].get<int>() << ',' << status << ','
          << field(row.value("run_dir", json(""))) << '\n';
    }
  }
  return sweep;
}

}  // namespace chiral
