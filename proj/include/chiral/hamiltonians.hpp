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

// hamiltonians.hpp: lab-frame, rotated-frame, block-structure and effective
// Hamiltonians for driven three-level Rydberg atoms.
//
// All returned operators are in angular units (rad/µs). Scalar couplings
// such as coupling_J return ordinary frequencies in MHz.

#pragma once

#include "chiral/hilbert.hpp"
#include "chiral/model.hpp"

#include <array>
#include <string>
#include <vector>

namespace chiral {

// Contributes exp(-i 2π f t) * op + h.c. to a driven operator.
struct DriveTerm {
  double frequency = 0.0;  // MHz
  SparseMat op;
};

// O(t) = static_part + sum_k [exp(-i 2π f_k t) A_k + h.c.].
//
// All pieces are merged onto one sparsity pattern at construction so that
// assemble() only rewrites values. The static part may be non-hermitian,
// which lets the integrator fold the decay term into the same object.
class DrivenOperator {
 public:
  DrivenOperator() = default;
  DrivenOperator(SparseMat static_part, std::vector<DriveTerm> terms);

  std::size_t dim() const { return static_cast<std::size_t>(pattern_.rows()); }
  bool time_independent() const { return terms_.empty(); }
  const SparseMat& static_part() const { return static_; }
  const std::vector<DriveTerm>& terms() const { return terms_; }

  // Copy of the merged pattern; pass it to assemble() as the output buffer.
  SparseMat pattern() const { return pattern_; }
  // Overwrites the values of `out`, which must come from pattern().
  void assemble(double t, SparseMat& out) const;
  SparseMat at(double t) const;

  // Largest drive frequency in MHz.
  double max_drive_frequency() const;
  // Gershgorin bound on the spectral radius in MHz (row sums of the static
  // part plus all drive amplitudes).
  double spectral_bound() const;
  // max(max_drive_frequency, spectral_bound): the frequency that sets the
  // integrator step bound.
  double max_frequency() const;

  DrivenOperator with_static_added(const SparseMat& extra) const;

 private:
  SparseMat static_;
  std::vector<DriveTerm> terms_;
  SparseMat pattern_;
  Eigen::VectorXcd static_values_;
  std::vector<Eigen::VectorXcd> term_values_;
  std::vector<Eigen::VectorXcd> term_adjoint_values_;
};

// Lab-frame Hamiltonian: drive terms for every site laser component and
// global field plus the pairwise Rydberg interaction.
DrivenOperator full_hamiltonian_terms(const ModelConfig& config);
Operator build_full_hamiltonian(const ModelConfig& config, double t_us);

// Rotated frame after removing the interaction and the terms rotating at
// Δ-δ and 2Δ-δ. Requires a ring triangle with U_ij = Δ for every pair unless
// allow_off_resonant_frame is set.
DrivenOperator rotated_hamiltonian_terms(const ModelConfig& config);
Operator build_rotated_hamiltonian(const ModelConfig& config, double t_us);

// Excited-manifold Hamiltonian H0 (three 3-state blocks) and the probe V+
// that maps single-excitation ground states into those blocks.
struct BlockStructure {
  Operator h0;
  Operator vplus;
  // Basis indices of each block, ordered as (outer, middle, outer).
  std::array<std::array<std::size_t, 3>, 3> blocks{};
};
BlockStructure build_block_structure(const ModelConfig& config);

// Hopping amplitude in MHz between the ground states bridged by one drive:
// Ω^2 exp(i(α-β)) Ω_p^2 / (δ^3 - 2δΩ_p^2). The bond index only labels errors.
cplx coupling_J(int bond, double omega, double delta, double omega_p, double alpha,
                double beta);
// Ω^2 (δ^2 - Ω_p^2) / (δ^3 - 2δΩ_p^2) in MHz.
double stark_term(double omega, double delta, double omega_p);

// Diagonal shifts (MHz) on |egg>, |geg>, |gge> from the block-structure
// elimination.
std::array<double, 3> stark_shifts(const ModelConfig& config);
// Second-order light shift (MHz) of the ground state with atom m excited,
// summed over every local drive component on the other atoms. This is what
// stark_compensation removes.
std::vector<double> ground_light_shifts(const ModelConfig& config);

struct EffectiveModel {
  std::array<cplx, 3> hoppings{};  // J_12, J_23, J_31 in MHz
  std::array<double, 3> stark{};   // on egg, geg, gge in MHz
  double flux = 0.0;               // rad, wrapped to (-π, π]
};
EffectiveModel effective_model(const ModelConfig& config);
// Sum_j J_{j,j+1} |g_j e_{j+1}><e_j g_{j+1}| + h.c. on the single-excitation
// ground states (third atom in g), plus the Stark diagonal when requested.
Operator build_effective_hamiltonian(const ModelConfig& config, bool include_stark);

double wrap_phase(double phi);
// Sum_j (α_j - β_j), wrapped to (-π, π].
double synthetic_flux(const std::vector<LocalDrive>& drives);

// Two atoms, one local drive index and one global field. Site 1 carries the
// beta component and site 2 the alpha component of that drive.
Operator build_two_atom_hamiltonian(const ModelConfig& config, double t_us);
// Frame rotating |r> at δ and |e> at δ-Δ on both atoms: time independent,
// with -δ on |r> and Δ-δ on |e>.
Operator build_two_atom_static_hamiltonian(const ModelConfig& config);

// Regular hexagon of six sites in the order A1, A2, A3, B1, B2, B3.
struct HoneycombDrives {
  std::array<LocalDrive, 3> local{};
  GlobalDrive nn{};   // resonant with nearest-neighbour pairs
  GlobalDrive nnn{};  // resonant with next-nearest-neighbour pairs
};
// Throws PreconditionError unless Δ_nn / Δ_nnn equals 27 to 1e-9 relative.
// C6 is chosen so that the nearest-neighbour interaction equals Δ_nn.
ModelConfig build_honeycomb_config(double r_nn_um, const HoneycombDrives& drives);

struct CouplingEntry {
  std::string bond;  // e.g. "A1-A2"
  int drive = 0;     // 1-based drive index
  bool nearest = false;
  cplx j_mhz = 0.0;
  std::string error;  // non-empty when the denominator is singular
};
// Hopping table of a honeycomb config: nearest-neighbour bonds use the first
// global field, next-nearest bonds the second.
std::vector<CouplingEntry> honeycomb_couplings(const ModelConfig& config);

}  // namespace chiral
