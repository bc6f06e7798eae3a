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

// dissipation.hpp: bare and effective jump operators.
//
// Jump operators carry sqrt(rad/µs) units so that L rho L^dagger has the
// same units as -i[H, rho] with H in rad/µs.

#pragma once

#include "chiral/hilbert.hpp"
#include "chiral/model.hpp"

#include <array>
#include <vector>

namespace chiral {

// Two channels per atom, sqrt(2πγ/2)|g><r| then sqrt(2πγ/2)|e><r|, ordered
// by atom. When gamma_dephase is nonzero one sqrt(2πγ_d)|r><r| channel per
// atom follows.
std::vector<Operator> build_jump_ops(const ModelConfig& config);

struct EffectiveRates {
  cplx chi = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
};

// Rates of the effective decay channels fed by drive j. Inputs are in MHz
// and radians; the evaluation uses the 2π-scaled quantities, so the Γ
// values are amplitudes in sqrt(rad/µs).
EffectiveRates effective_rates(int j, double omega, double delta, double omega_p,
                               double gamma, double alpha, double beta);

// Two-atom template t (1..4) on the ordered pair (first, second), each
// term an outer product of pair states:
//   t=1: Γ1|ge><ge| + Γ2|ge><eg| + Γ3(|gr><ge| + |gr><eg|)
//   t=2: Γ1|ee><ge| + Γ2|ee><eg| + Γ3(|er><ge| + |er><eg|)
//   t=3: Γ1|eg><eg| + Γ2|eg><ge| + Γ3(|rg><ge| + |rg><eg|)
//   t=4: Γ1|ee><eg| + Γ2|ee><ge| + Γ3(|re><ge| + |re><eg|)
// The remaining atom is left untouched.
Operator effective_jump_template(int t, const EffectiveRates& rates, int first_atom,
                                 int n_atoms);

// One summand of an effective jump operator: template index, drive index
// whose rates it uses, and the first atom of the embedding pair (the pair
// is (atom, atom+1) cyclically). All indices are 1-based.
struct TemplateRef {
  int template_index;
  int drive;
  int pair_start;
};
// The six effective channels as sums of two templates each.
const std::array<std::array<TemplateRef, 2>, 6>& effective_jump_table();

std::vector<Operator> build_effective_jump_ops(const ModelConfig& config);

struct EffectiveGenerator {
  Operator h_eff;
  std::vector<Operator> jumps;
};

// Second-order elimination of the manifold that H0 and the range of V+
// live on: H_eff = -1/2 V+^dagger [H0^-1 + (H0^-1)^dagger] V+ and
// L_eff = L H_NH^-1 V+ with H_NH = H0 - (i/2) sum L^dagger L. Inverses are
// taken on that support only; a singular value below 1e-10 of the largest
// raises SingularityError.
EffectiveGenerator derive_effective_generator(const Operator& h0, const Operator& vplus,
                                              const std::vector<Operator>& jumps);

}  // namespace chiral
