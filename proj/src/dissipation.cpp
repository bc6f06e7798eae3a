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

#include "chiral/dissipation.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <set>

namespace chiral {

std::vector<Operator> build_jump_ops(const ModelConfig& config) {
  config.validate();
  const int n = config.n_atoms;
  const double amp = std::sqrt(kTwoPi * config.decay.gamma / 2.0);
  std::vector<Operator> out;
  for (int a = 1; a <= n; ++a) {
    out.push_back(embed(transition(Level::g, Level::r), a, n).scaled(amp));
    out.push_back(embed(transition(Level::e, Level::r), a, n).scaled(amp));
  }
  if (config.decay.gamma_dephase > 0.0) {
    const double deph = std::sqrt(kTwoPi * config.decay.gamma_dephase);
    for (int a = 1; a <= n; ++a) out.push_back(embed(projector(Level::r), a, n).scaled(deph));
  }
  return out;
}

EffectiveRates effective_rates(int j, double omega, double delta, double omega_p,
                               double gamma, double alpha, double beta) {
  const double w = kTwoPi * omega, d = kTwoPi * delta, p = kTwoPi * omega_p,
               g = kTwoPi * gamma;
  const cplx i(0.0, 1.0);
  const cplx chi_den = g * g - 3.0 * i * g * d - 2.0 * d * d + 4.0 * p * p;
  const cplx lorentz = g - 2.0 * i * d;
  if (std::abs(chi_den) <= 1e-12 || std::abs(lorentz) <= 1e-12) {
    throw SingularityError("effective rates for drive " + std::to_string(j) +
                           ": vanishing denominator");
  }
  EffectiveRates r;
  r.chi = std::sqrt(2.0 * g) / chi_den;
  r.gamma1 = std::abs(w * r.chi * (g * g - 3.0 * i * g * d - 2.0 * d * d + 2.0 * p * p) / lorentz);
  r.gamma2 = std::abs(2.0 * w * p * p * r.chi / lorentz);
  r.gamma3 = std::abs((std::polar(w, alpha) + std::polar(w, beta)) * p * r.chi / 2.0);
  return r;
}

Operator effective_jump_template(int t, const EffectiveRates& rates, int first_atom,
                                 int n_atoms) {
  if (t < 1 || t > 4) throw std::invalid_argument("template index must be in 1..4");
  const int second_atom = first_atom % n_atoms + 1;
  const Level G = Level::g, E = Level::e, R = Level::r;
  using Pair = std::array<Level, 2>;
  struct Term {
    double coeff;
    Pair to, from;
  };
  // Target pairs of the Γ1/Γ2 terms and of the Γ3 terms per template.
  const Pair ge = {G, E}, eg = {E, G};
  Pair keep{}, leak{};
  Pair g1_from{}, g2_from{};
  switch (t) {
    case 1: keep = ge; leak = {G, R}; g1_from = ge; g2_from = eg; break;
    case 2: keep = {E, E}; leak = {E, R}; g1_from = ge; g2_from = eg; break;
    case 3: keep = eg; leak = {R, G}; g1_from = eg; g2_from = ge; break;
    default: keep = {E, E}; leak = {R, E}; g1_from = eg; g2_from = ge; break;
  }
  const std::vector<Term> terms = {{rates.gamma1, keep, g1_from},
                                   {rates.gamma2, keep, g2_from},
                                   {rates.gamma3, leak, ge},
                                   {rates.gamma3, leak, eg}};
  Operator out = Operator::zero(hilbert_dim(n_atoms));
  for (const Term& term : terms) {
    if (term.coeff == 0.0) continue;
    const Operator a = embed(transition(term.to[0], term.from[0]), first_atom, n_atoms);
    const Operator b = embed(transition(term.to[1], term.from[1]), second_atom, n_atoms);
    out = out + (a * b).scaled(term.coeff);
  }
  return out;
}

const std::array<std::array<TemplateRef, 2>, 6>& effective_jump_table() {
  static const std::array<std::array<TemplateRef, 2>, 6> table = {{
      {{{1, 1, 2}, {3, 3, 1}}},
      {{{2, 1, 2}, {4, 3, 1}}},
      {{{3, 1, 2}, {1, 2, 3}}},
      {{{4, 1, 2}, {2, 2, 3}}},
      {{{3, 2, 3}, {1, 3, 1}}},
      {{{4, 2, 3}, {2, 3, 1}}},
  }};
  return table;
}

std::vector<Operator> build_effective_jump_ops(const ModelConfig& config) {
  config.validate();
  if (!is_ring_triangle(config)) {
    throw PreconditionError("effective jump operators require the three-atom ring");
  }
  const double op = config.global_drives[0].amplitude;
  std::array<EffectiveRates, 3> rates{};
  for (int k = 0; k < 3; ++k) {
    const LocalDrive& d = config.local_drives[static_cast<std::size_t>(k)];
    rates[static_cast<std::size_t>(k)] =
        effective_rates(k + 1, d.amplitude, d.detuning, op, config.decay.gamma, d.alpha, d.beta);
  }
  std::vector<Operator> out;
  for (const auto& pair : effective_jump_table()) {
    Operator sum = Operator::zero(27);
    for (const TemplateRef& ref : pair) {
      sum = sum + effective_jump_template(ref.template_index,
                                          rates[static_cast<std::size_t>(ref.drive - 1)],
                                          ref.pair_start, 3);
    }
    out.push_back(sum);
  }
  return out;
}

namespace {

Eigen::MatrixXcd restricted_inverse(const Eigen::MatrixXcd& block) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return block;
  if (!(s(s.size() - 1) > 1e-10 * s(0))) {
    throw SingularityError("restricted excited-manifold operator is singular");
  }
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

EffectiveGenerator derive_effective_generator(const Operator& h0, const Operator& vplus,
                                              const std::vector<Operator>& jumps) {
  const std::size_t dim = h0.dim();
  if (vplus.dim() != dim) throw std::invalid_argument("H0 and V+ dimensions differ");
  for (const Operator& l : jumps) {
    if (l.dim() != dim) throw std::invalid_argument("jump operator dimension mismatch");
  }

  std::set<Eigen::Index> support;
  for (Eigen::Index r = 0; r < h0.matrix().outerSize(); ++r) {
    for (SparseMat::InnerIterator it(h0.matrix(), r); it; ++it) {
      if (it.value() != cplx(0.0)) {
        support.insert(it.row());
        support.insert(it.col());
      }
    }
  }
  for (Eigen::Index r = 0; r < vplus.matrix().outerSize(); ++r) {
    for (SparseMat::InnerIterator it(vplus.matrix(), r); it; ++it) {
      if (it.value() != cplx(0.0)) support.insert(it.row());
    }
  }

  EffectiveGenerator out;
  const auto n = static_cast<Eigen::Index>(dim);
  if (support.empty() || vplus.nnz() == 0) {
    out.h_eff = Operator::zero(dim);
    out.jumps.assign(jumps.size(), Operator::zero(dim));
    return out;
  }

  const std::vector<Eigen::Index> idx(support.begin(), support.end());
  const auto m = static_cast<Eigen::Index>(idx.size());
  // Selection matrix P (m x dim) onto the support.
  Eigen::MatrixXcd sel = Eigen::MatrixXcd::Zero(m, n);
  for (Eigen::Index k = 0; k < m; ++k) sel(k, idx[static_cast<std::size_t>(k)]) = 1.0;

  const Eigen::MatrixXcd h0d = h0.dense();
  Eigen::MatrixXcd decay = Eigen::MatrixXcd::Zero(n, n);
  for (const Operator& l : jumps) {
    const Eigen::MatrixXcd ld = l.dense();
    decay += ld.adjoint() * ld;
  }
  const Eigen::MatrixXcd h0_s = sel * h0d * sel.adjoint();
  const Eigen::MatrixXcd hnh_s = sel * (h0d - cplx(0.0, 0.5) * decay) * sel.adjoint();
  const Eigen::MatrixXcd v_s = sel * vplus.dense();  // m x dim

  const Eigen::MatrixXcd h0_inv = restricted_inverse(h0_s);
  const Eigen::MatrixXcd hnh_inv = restricted_inverse(hnh_s);

  const Eigen::MatrixXcd h_eff = -0.5 * v_s.adjoint() * (h0_inv + h0_inv.adjoint()) * v_s;
  out.h_eff = Operator::from_dense(h_eff);
  for (const Operator& l : jumps) {
    const Eigen::MatrixXcd l_s = l.dense() * sel.adjoint();  // dim x m
    out.jumps.push_back(Operator::from_dense(l_s * hnh_inv * v_s));
  }
  return out;
}

}  // namespace chiral
