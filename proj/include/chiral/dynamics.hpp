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

// dynamics.hpp: master-equation and Schrödinger integration.
//
// Two propagators are provided. integrate_master runs classical RK4 with a
// fixed step on a time-dependent generator; propagate_spectral
// exponentiates the vectorized Lindblad superoperator of a static generator
// once and reuses the step map.

#pragma once

#include "chiral/hamiltonians.hpp"
#include "chiral/hilbert.hpp"
#include "chiral/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

enum class Frame { full, rotated, effective, two_atom, two_atom_static };

Frame frame_from_string(std::string_view name);
std::string to_string(Frame frame);

// Setup rejected because the run would be prohibitively long.
class CostGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step count above which a fixed-step run is rejected at setup.
inline constexpr double kMaxFixedSteps = 5e7;
// Steps per period of the fastest frequency in the generator.
inline constexpr double kStepsPerPeriod = 20.0;

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  std::size_t sample_stride = 1;

  std::size_t n_steps() const;
};

// Grid sampled every sample_dt with the largest step not above dt_max that
// divides the sampling interval. t_end is rounded up to a whole sample.
TimeGrid make_grid(double t_end, double sample_dt, double dt_max, double t_start = 0.0);

struct TimeSeries {
  std::vector<double> times;  // µs
  std::vector<std::string> labels;
  std::vector<std::vector<double>> populations;  // [label][sample]
  std::vector<double> trace;
  std::vector<double> min_eig;  // NaN where positivity was not evaluated
  std::vector<double> hermitian_defect;

  std::size_t size() const { return times.size(); }
  const std::vector<double>& curve(std::string_view label) const;
  bool has(std::string_view label) const;
};

struct IntegrationOptions {
  // Basis indices to record; empty means every basis state.
  std::vector<std::size_t> tracked;
  bool check_positivity = true;
  // Evaluate the minimum eigenvalue on every k-th sample.
  std::size_t positivity_stride = 1;
};

// Hamiltonian (rad/µs) and jump operators of one frame.
struct MasterGenerator {
  DrivenOperator hamiltonian;
  std::vector<SparseMat> jumps;
  int n_atoms = 0;

  // Frequency in MHz that sets the step bound.
  double max_frequency() const;
  double dt_bound() const { return 1.0 / (kStepsPerPeriod * max_frequency()); }
};

MasterGenerator make_generator(const ModelConfig& config, Frame frame);

// Lindblad right-hand side -i[H, rho] + sum L rho L^dagger - 1/2{L^dagger L, rho}
// for an arbitrary (not necessarily hermitian) rho.
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& h,
                           const std::vector<Operator>& jumps);

// Throws std::invalid_argument when grid.dt exceeds the generator's bound
// and CostGuardError when the step count exceeds kMaxFixedSteps. rho0 must
// be hermitian.
TimeSeries integrate_master(const MasterGenerator& gen, const DensityMatrix& rho0,
                            const TimeGrid& grid, const IntegrationOptions& options = {});
TimeSeries integrate_fixed(const ModelConfig& config, const DensityMatrix& rho0,
                           const TimeGrid& grid, Frame frame,
                           const IntegrationOptions& options = {});

// Static generator only; dim^2 must not exceed 10000.
TimeSeries propagate_spectral(const Operator& h, const std::vector<Operator>& jumps,
                              const DensityMatrix& rho0, const std::vector<double>& sample_times,
                              const IntegrationOptions& options = {});

// Schrödinger evolution of a state vector with the same RK4 scheme. Throws
// PreconditionError when any decay rate is nonzero. The trace column holds
// the squared norm.
TimeSeries evolve_unitary(const ModelConfig& config, const Eigen::VectorXcd& psi0,
                          const TimeGrid& grid, Frame frame,
                          const IntegrationOptions& options = {});

struct InvariantReport {
  double max_trace_error = 0.0;
  double max_hermitian_defect = 0.0;
  double min_eigenvalue = 0.0;  // over evaluated samples
  double min_population = 0.0;
  double max_population = 0.0;
  bool trace_ok = true;
  bool hermitian_ok = true;
  bool positivity_ok = true;
  bool populations_ok = true;

  bool ok() const { return trace_ok && hermitian_ok && positivity_ok && populations_ok; }
};

// Tolerances: trace 1e-6, hermiticity 1e-9, eigenvalues -1e-6, populations
// within [-1e-6, 1 + 1e-6].
InvariantReport check_invariants(const TimeSeries& series);

}  // namespace chiral
