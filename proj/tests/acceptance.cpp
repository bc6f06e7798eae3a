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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "chiral/analysis.hpp"
#include "chiral/dissipation.hpp"
#include "chiral/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace chiral;
using nlohmann::json;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok) { pass = pass && ok; }
};

// Scenario runs shared between criteria, keyed by label.
std::map<std::string, RunResult> g_runs;

const RunResult& run(const std::string& label, const std::string& scenario,
                     const ParamMap& params = {}) {
  auto it = g_runs.find(label);
  if (it != g_runs.end()) return it->second;
  RunOptions o;
  o.write_files = false;
  const auto start = std::chrono::steady_clock::now();
  RunResult r = run_scenario(scenario, params, o);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("  [run %s: %.1f s]\n", label.c_str(), secs);
  std::fflush(stdout);
  return g_runs.emplace(label, std::move(r)).first->second;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

int report(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail << " error: " << e.what();
  }
  std::printf("criterion %d: %s  %s |%s\n", id, c.pass ? "PASS" : "FAIL", title.c_str(),
              c.detail.str().c_str());
  std::fflush(stdout);
  return c.pass ? 0 : 1;
}

void couplings(Check& c) {
  const EffectiveModel m = effective_model(triangle_model(scenario_defaults("triangle-full")));
  double worst = 0.0;
  for (const cplx& j : m.hoppings) worst = std::max(worst, rel(std::abs(j), 0.01));
  c.require(worst < 1e-9);
  c.detail << " ring max rel err " << worst << ";";

  const ParamMap p = scenario_defaults("honeycomb-couplings");
  const ModelConfig h = build_honeycomb_config(p.number("R"), honeycomb_drives(p));
  double worst_h = 0.0;
  for (const CouplingEntry& e : honeycomb_couplings(h)) {
    c.require(e.error.empty());
    const double khz = std::abs(e.j_mhz) * 1000.0;
    const double want = e.nearest ? (e.drive == 3 ? 0.48588 : 1.0) : 0.47845;
    const double err = rel(khz, want);
    worst_h = std::max(worst_h, err);
    if (err >= 5e-3) {
      c.detail << " " << (e.nearest ? "nn" : "nnn") << " drive " << e.drive << " " << khz
               << " kHz vs " << want << ";";
    }
  }
  c.require(worst_h < 5e-3);
  c.detail << " honeycomb max rel err " << worst_h;
}

void elimination(Check& c) {
  const ModelConfig cfg = triangle_model(scenario_defaults("triangle-full"));
  const BlockStructure b = build_block_structure(cfg);
  const EffectiveGenerator g = derive_effective_generator(b.h0, b.vplus, build_jump_ops(cfg));
  const Operator closed = build_effective_hamiltonian(cfg, true);
  const std::size_t sites[3] = {state_index("egg"), state_index("geg"), state_index("gge")};
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t a : sites) {
    for (std::size_t bb : sites) scale = std::max(scale, std::abs(closed.element(a, bb)));
  }
  for (std::size_t a : sites) {
    for (std::size_t bb : sites) {
      const cplx want = closed.element(a, bb);
      const cplx got = g.h_eff.element(a, bb);
      // Vanishing elements are measured against the largest element.
      const double denom = std::abs(want) > 0.0 ? std::abs(want) : scale;
      worst = std::max(worst, std::abs(got - want) / denom);
    }
  }
  c.require(worst < 1e-6);
  c.detail << " max rel err " << worst;
}

std::array<double, 3> peak_times(const RunResult& r) {
  const json& pk = r.record["results"]["chirality"]["peak_times_us"];
  std::array<double, 3> t{};
  const char* labels[3] = {"egg", "geg", "gge"};
  for (std::size_t s = 0; s < 3; ++s) {
    t[s] = pk[labels[s]].is_number() ? pk[labels[s]].get<double>() : std::nan("");
  }
  return t;
}

void chirality(Check& c) {
  const RunResult& fwd = run("triangle-full", "triangle-full");
  const RunResult& bwd = run("flux-reversed", "flux-reversed");
  const int dir_f = fwd.record["results"]["chirality"]["direction"].get<int>();
  const int dir_b = bwd.record["results"]["chirality"]["direction"].get<int>();
  c.require(dir_f == +1);
  c.require(dir_b == -1);
  auto tf = peak_times(fwd);
  auto tb = peak_times(bwd);
  c.detail << " directions " << dir_f << "/" << dir_b << "; first peaks (egg,geg,gge) us fwd "
           << tf[0] << "," << tf[1] << "," << tf[2] << " rev " << tb[0] << "," << tb[1] << ","
           << tb[2] << ";";
  std::sort(tf.begin(), tf.end());
  std::sort(tb.begin(), tb.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, rel(tb[k], tf[k]));
  if (std::isnan(worst)) worst = INFINITY;
  c.require(worst < 0.02);
  c.detail << " sorted peak-time mismatch " << worst;
}

void full_vs_effective(Check& c) {
  const RunResult& full = run("triangle-full", "triangle-full");
  const RunResult& eff = run("triangle-effective", "triangle-effective");
  const double d = compare_series(full.series, eff.series);
  c.require(d < 0.05);
  c.detail << " window " << full.series.times.back() << " us; max deviation " << d;
}

ParamMap with(const std::string& key, const std::string& value) {
  ParamMap p;
  p.set(key, value);
  return p;
}

void frames(Check& c) {
  const RunResult& lab = run("triangle-unitary/full", "triangle-unitary", with("frame", "full"));
  const RunResult& rot =
      run("triangle-unitary/rotated", "triangle-unitary", with("frame", "rotated"));
  const double d = compare_series(lab.series, rot.series);
  c.require(d < 0.02);
  c.detail << " window " << lab.series.times.back() << " us; max deviation " << d;
}

void distance(Check& c) {
  const double radii[3] = {4.3247, 4.3447, 4.3647};
  const double u_want[3] = {20.561, 20.0, 19.456};
  std::vector<double> periods;
  for (int k = 0; k < 3; ++k) {
    ParamMap p;
    p.set("R", radii[k]);
    const RunResult& r =
        run("nnn-triangle-sweep/R=" + std::to_string(radii[k]), "nnn-triangle-sweep", p);
    const json& res = r.record["results"];
    const double u = res["U_mhz"].get<double>();
    c.require(rel(u, u_want[k]) < 1e-3);
    c.detail << " R " << radii[k] << ": U " << u;
    if (res["period_us"].is_number()) {
      periods.push_back(res["period_us"].get<double>());
      c.detail << " MHz, period " << periods.back() << " us;";
    } else {
      c.require(false);
      c.detail << " MHz, no period;";
    }
  }
  if (periods.size() == 3) {
    const auto [lo, hi] = std::minmax_element(periods.begin(), periods.end());
    const double spread = *hi / *lo - 1.0;
    c.require(spread < 0.05);
    c.detail << " period spread " << spread;
  }
}

void coherence(Check& c) {
  const RunResult& r = run("coherence-two-atom", "coherence-two-atom");
  const json& co = r.record["results"]["coherence"];
  if (!co["bounded"].get<bool>() || !co["t_1e_ms"].is_number()) {
    c.require(false);
    c.detail << " no bounded coherence time: " << co.value("diagnostic", "");
    return;
  }
  const double t1e = co["t_1e_ms"].get<double>();
  const double nosc = co["n_osc"].get<double>();
  c.require(rel(t1e, 105.5) < 0.05);
  c.require(rel(nosc, 11.5) < 0.10);
  c.detail << " t_1e " << t1e << " ms, n_osc " << nosc << ", period " << co["period_ms"]
           << " ms (" << co["diagnostic"].get<std::string>() << ")";
}

// Max population change when the step of a short reference window is halved.
double halving_change(const std::string& scenario, ParamMap p) {
  p.set("t_end", 1.0);
  p.set("sample_dt", 0.1);
  RunOptions o;
  o.write_files = false;
  const RunResult base = run_scenario(scenario, p, o);
  o.dt = base.record["results"]["dt_us"].get<double>() / 2.0;
  const RunResult half = run_scenario(scenario, p, o);
  return compare_series(base.series, half.series);
}

void invariants(Check& c) {
  run("triangle-rotated", "triangle-rotated");
  int failed = 0;
  for (const auto& [label, r] : g_runs) {
    const json& inv = r.record["invariants"];
    if (!inv["passed"].get<bool>()) {
      ++failed;
      c.detail << " " << label << " invariants failed " << inv.dump() << ";";
    }
  }
  c.require(failed == 0);
  c.detail << " " << g_runs.size() - failed << "/" << g_runs.size() << " runs pass invariants;";

  const std::vector<std::pair<std::string, ParamMap>> fixed = {
      {"triangle-full", {}},
      {"flux-reversed", {}},
      {"triangle-effective", {}},
      {"triangle-rotated", {}},
      {"triangle-unitary", with("frame", "full")},
      {"triangle-unitary", with("frame", "rotated")},
      {"nnn-triangle-sweep", {}}};
  double worst = 0.0;
  for (const auto& [name, p] : fixed) worst = std::max(worst, halving_change(name, p));
  c.require(worst < 1e-7);
  c.detail << " dt-halving max change " << worst << " over 1 us;";

  // Static generators: two-atom model and effective ring.
  double worst_spec = 0.0;
  {
    const ParamMap p = scenario_defaults("coherence-two-atom");
    const ModelConfig cfg = two_atom_model(p);
    const Operator h = build_two_atom_static_hamiltonian(cfg);
    const auto jumps = build_jump_ops(cfg);
    MasterGenerator gen;
    gen.n_atoms = 2;
    gen.hamiltonian = DrivenOperator(h.matrix(), {});
    for (const Operator& l : jumps) gen.jumps.push_back(l.matrix());
    const DensityMatrix rho0 = DensityMatrix::pure(state_index("eg"), 9);
    const TimeSeries f = integrate_master(gen, rho0, make_grid(20.0, 1.0, gen.dt_bound() / p.number("dt_refine")));
    const TimeSeries s = propagate_spectral(h, jumps, rho0, f.times);
    worst_spec = std::max(worst_spec, compare_series(f, s));
  }
  {
    const ModelConfig cfg = triangle_model(scenario_defaults("triangle-effective"));
    const MasterGenerator gen = make_generator(cfg, Frame::effective);
    const RunResult& eff = run("triangle-effective", "triangle-effective");
    std::vector<Operator> jumps;
    for (const SparseMat& l : gen.jumps) jumps.emplace_back(l);
    const TimeSeries s =
        propagate_spectral(Operator(gen.hamiltonian.static_part(), true), jumps,
                           DensityMatrix::pure(state_index("egg"), 27), eff.series.times);
    worst_spec = std::max(worst_spec, compare_series(eff.series, s));
  }
  c.require(worst_spec < 1e-6);
  c.detail << " spectral vs fixed-step " << worst_spec;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  failures += report(1, "coupling reproduction", couplings);
  failures += report(2, "elimination cross-check", elimination);
  failures += report(3, "chirality and time-reversal breaking", chirality);
  failures += report(4, "full vs effective dynamics", full_vs_effective);
  failures += report(5, "lab vs rotated frame", frames);
  failures += report(6, "distance robustness", distance);
  failures += report(7, "coherence time", coherence);
  failures += report(8, "invariant suite", invariants);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 8 criteria failed (%.0f s)\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
