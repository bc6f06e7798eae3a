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

#include "chiral/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace chiral {

namespace {

constexpr double kSingularityGuard = 1e-9;

cplx phasor(double amplitude, double phase) { return std::polar(amplitude, phase); }

// Values of `m` laid out on the nonzero slots of `pattern`. Every entry of
// `m` must be present in `pattern`.
Eigen::VectorXcd align_values(const SparseMat& pattern, const SparseMat& m) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(pattern.nonZeros());
  const auto* p_outer = pattern.outerIndexPtr();
  const auto* p_inner = pattern.innerIndexPtr();
  const auto* m_outer = m.outerIndexPtr();
  const auto* m_inner = m.innerIndexPtr();
  for (Eigen::Index row = 0; row < pattern.outerSize(); ++row) {
    auto p = p_outer[row];
    for (auto q = m_outer[row]; q < m_outer[row + 1]; ++q) {
      while (p < p_outer[row + 1] && p_inner[p] < m_inner[q]) ++p;
      if (p == p_outer[row + 1] || p_inner[p] != m_inner[q]) {
        throw std::logic_error("align_values: entry outside the merged pattern");
      }
      out(p) = m.valuePtr()[q];
    }
  }
  return out;
}

SparseMat abs_structure(const SparseMat& m) {
  SparseMat s = m;
  for (Eigen::Index k = 0; k < s.nonZeros(); ++k) s.valuePtr()[k] = 1.0;
  return s;
}

double row_sum_bound(const SparseMat& m, Eigen::VectorXd& rows) {
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMat::InnerIterator it(m, r); it; ++it) rows(r) += std::abs(it.value());
  }
  return rows.maxCoeff();
}

Operator embed_product(const std::vector<std::pair<int, Matrix3c>>& factors, int n_atoms) {
  Operator out = Operator::identity(hilbert_dim(n_atoms));
  for (const auto& [site, local] : factors) out = out * embed(local, site, n_atoms);
  return out;
}

// 2π Σ_{i<j} U_ij P^r_i P^r_j.
SparseMat interaction_term(const ModelConfig& config) {
  const int n = config.n_atoms;
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));
  SparseMat out(dim, dim);
  const Matrix3c pr = projector(Level::r);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double u = config.geometry.interactions(i, j);
      if (u == 0.0) continue;
      out += embed_product({{i + 1, pr}, {j + 1, pr}}, n).matrix() * cplx(kTwoPi * u);
    }
  }
  return out;
}

// -2π Σ_m c_m P^e_m with c_m the ground-state light shifts.
SparseMat compensation_term(const ModelConfig& config) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(config.n_atoms));
  SparseMat out(dim, dim);
  if (!config.stark_compensation) return out;
  const std::vector<double> shifts = ground_light_shifts(config);
  for (int m = 0; m < config.n_atoms; ++m) {
    out += embed(projector(Level::e), m + 1, config.n_atoms).matrix() *
           cplx(-kTwoPi * shifts[static_cast<std::size_t>(m)]);
  }
  return out;
}

// Merges drive terms that share a frequency.
std::vector<DriveTerm> merge_terms(std::vector<DriveTerm> terms) {
  std::map<double, SparseMat> by_freq;
  for (DriveTerm& t : terms) {
    auto it = by_freq.find(t.frequency);
    if (it == by_freq.end()) {
      by_freq.emplace(t.frequency, std::move(t.op));
    } else {
      it->second += t.op;
    }
  }
  std::vector<DriveTerm> out;
  for (auto& [f, op] : by_freq) {
    op.makeCompressed();
    out.push_back({f, std::move(op)});
  }
  return out;
}

void require_ring_triangle(const ModelConfig& config, const char* who) {
  config.validate();
  if (!is_ring_triangle(config)) {
    throw PreconditionError(std::string(who) +
                            " requires three atoms on a closed ring with one global field");
  }
}

const LocalDrive& ring_drive(const ModelConfig& config, int j) {
  return config.local_drives[static_cast<std::size_t>(((j % 3) + 3) % 3)];
}

}  // namespace

DrivenOperator::DrivenOperator(SparseMat static_part, std::vector<DriveTerm> terms)
    : static_(std::move(static_part)), terms_(std::move(terms)) {
  static_.makeCompressed();
  SparseMat pattern = abs_structure(static_);
  for (DriveTerm& t : terms_) {
    if (t.op.rows() != static_.rows() || t.op.cols() != static_.cols()) {
      throw std::invalid_argument("drive term dimension mismatch");
    }
    t.op.makeCompressed();
    pattern += abs_structure(t.op);
    pattern += abs_structure(SparseMat(t.op.adjoint()));
  }
  pattern.makeCompressed();
  pattern_ = pattern;
  static_values_ = align_values(pattern_, static_);
  for (const DriveTerm& t : terms_) {
    term_values_.push_back(align_values(pattern_, t.op));
    term_adjoint_values_.push_back(align_values(pattern_, SparseMat(t.op.adjoint())));
  }
  for (Eigen::Index k = 0; k < pattern_.nonZeros(); ++k) pattern_.valuePtr()[k] = 0.0;
}

void DrivenOperator::assemble(double t, SparseMat& out) const {
  if (out.nonZeros() != pattern_.nonZeros()) {
    throw std::invalid_argument("assemble: output does not share the merged pattern");
  }
  Eigen::Map<Eigen::VectorXcd> values(out.valuePtr(), out.nonZeros());
  values = static_values_;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const cplx c = std::polar(1.0, -kTwoPi * terms_[k].frequency * t);
    values += c * term_values_[k] + std::conj(c) * term_adjoint_values_[k];
  }
}

SparseMat DrivenOperator::at(double t) const {
  SparseMat out = pattern_;
  assemble(t, out);
  return out;
}

double DrivenOperator::max_drive_frequency() const {
  double f = 0.0;
  for (const DriveTerm& t : terms_) f = std::max(f, std::abs(t.frequency));
  return f;
}

double DrivenOperator::spectral_bound() const {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  row_sum_bound(static_, rows);
  for (const DriveTerm& t : terms_) {
    row_sum_bound(t.op, rows);
    row_sum_bound(SparseMat(t.op.adjoint()), rows);
  }
  return rows.size() == 0 ? 0.0 : rows.maxCoeff() / kTwoPi;
}

double DrivenOperator::max_frequency() const {
  return std::max(max_drive_frequency(), spectral_bound());
}

DrivenOperator DrivenOperator::with_static_added(const SparseMat& extra) const {
  return DrivenOperator(SparseMat(static_ + extra), terms_);
}

DrivenOperator full_hamiltonian_terms(const ModelConfig& config) {
  config.validate();
  const int n = config.n_atoms;
  const Matrix3c rg = transition(Level::r, Level::g);
  const Matrix3c re = transition(Level::r, Level::e);
  std::vector<DriveTerm> terms;
  for (int s = 0; s < n; ++s) {
    const SiteLasers& lasers = config.site_lasers[static_cast<std::size_t>(s)];
    const SparseMat site_rg = embed(rg, s + 1, n).matrix();
    if (lasers.alpha_drive >= 0) {
      const LocalDrive& d = config.local_drives[static_cast<std::size_t>(lasers.alpha_drive)];
      terms.push_back({d.detuning, site_rg * (kTwoPi * phasor(d.amplitude, d.alpha))});
    }
    if (lasers.beta_drive >= 0) {
      const LocalDrive& d = config.local_drives[static_cast<std::size_t>(lasers.beta_drive)];
      terms.push_back({d.detuning, site_rg * (kTwoPi * phasor(d.amplitude, d.beta))});
    }
    const SparseMat site_re = embed(re, s + 1, n).matrix();
    for (const GlobalDrive& g : config.global_drives) {
      terms.push_back({g.detuning, site_re * cplx(kTwoPi * g.amplitude)});
    }
  }
  SparseMat stat = interaction_term(config);
  stat += compensation_term(config);
  return DrivenOperator(std::move(stat), merge_terms(std::move(terms)));
}

Operator build_full_hamiltonian(const ModelConfig& config, double t_us) {
  return Operator(full_hamiltonian_terms(config).at(t_us), true);
}

DrivenOperator rotated_hamiltonian_terms(const ModelConfig& config) {
  require_ring_triangle(config, "rotated frame");
  const double big_delta = config.global_drives[0].detuning;
  if (big_delta == 0.0) throw PreconditionError("rotated frame requires a nonzero global detuning");
  if (!config.allow_off_resonant_frame) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const double u = config.geometry.interactions(i, j);
        if (std::abs(u - big_delta) > 1e-9 * std::abs(big_delta)) {
          throw PreconditionError("rotated frame requires U_ij = Delta for every pair (U_" +
                                  std::to_string(i + 1) + std::to_string(j + 1) + " = " +
                                  std::to_string(u) + " MHz, Delta = " +
                                  std::to_string(big_delta) + " MHz)");
        }
      }
    }
  }
  const int n = 3;
  const Matrix3c rg = transition(Level::r, Level::g);
  const Matrix3c re = transition(Level::r, Level::e);
  const Matrix3c pg = projector(Level::g), pe = projector(Level::e), pr = projector(Level::r);
  const double omega_p = config.global_drives[0].amplitude;

  std::vector<DriveTerm> terms;
  SparseMat stat(27, 27);
  for (int j = 0; j < n; ++j) {
    const int a1 = j + 1, a2 = (j + 1) % n + 1, a3 = (j + 2) % n + 1;
    const SparseMat gate_rg = (embed_product({{a1, rg}, {a2, pe}, {a3, pg}}, n) +
                               embed_product({{a1, rg}, {a2, pg}, {a3, pe}}, n))
                                  .matrix();
    const SiteLasers& lasers = config.site_lasers[static_cast<std::size_t>(j)];
    const LocalDrive& da = config.local_drives[static_cast<std::size_t>(lasers.alpha_drive)];
    const LocalDrive& db = config.local_drives[static_cast<std::size_t>(lasers.beta_drive)];
    terms.push_back({da.detuning, gate_rg * (kTwoPi * phasor(da.amplitude, da.alpha))});
    terms.push_back({db.detuning, gate_rg * (kTwoPi * phasor(db.amplitude, db.beta))});

    const SparseMat gate_re = (embed_product({{a1, re}, {a2, pg}, {a3, pr}}, n) +
                               embed_product({{a1, re}, {a2, pr}, {a3, pg}}, n))
                                  .matrix() *
                              cplx(kTwoPi * omega_p);
    stat += gate_re;
    stat += SparseMat(gate_re.adjoint());
  }
  stat += compensation_term(config);
  return DrivenOperator(std::move(stat), merge_terms(std::move(terms)));
}

Operator build_rotated_hamiltonian(const ModelConfig& config, double t_us) {
  return Operator(rotated_hamiltonian_terms(config).at(t_us), true);
}

BlockStructure build_block_structure(const ModelConfig& config) {
  require_ring_triangle(config, "block structure");
  const double omega_p = config.global_drives[0].amplitude;
  const auto idx = [](const char* label) { return state_index(label); };

  BlockStructure out;
  // Block j is driven at δ_j; its outer states hold a Rydberg atom next to
  // an |e> atom and its middle state holds two Rydberg atoms.
  out.blocks = {{{idx("egr"), idx("rgr"), idx("rge")},
                 {idx("erg"), idx("rrg"), idx("reg")},
                 {idx("gre"), idx("grr"), idx("ger")}}};

  std::vector<Eigen::Triplet<cplx>> h0;
  for (int j = 0; j < 3; ++j) {
    const double delta = ring_drive(config, j).detuning;
    const auto& b = out.blocks[static_cast<std::size_t>(j)];
    for (std::size_t s : b) {
      h0.emplace_back(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s),
                      cplx(-kTwoPi * delta));
    }
    for (std::size_t outer : {b[0], b[2]}) {
      const cplx w = kTwoPi * omega_p;
      h0.emplace_back(static_cast<Eigen::Index>(b[1]), static_cast<Eigen::Index>(outer), w);
      h0.emplace_back(static_cast<Eigen::Index>(outer), static_cast<Eigen::Index>(b[1]), w);
    }
  }
  SparseMat h0m(27, 27);
  h0m.setFromTriplets(h0.begin(), h0.end());
  out.h0 = Operator(std::move(h0m), true);

  const LocalDrive& d1 = ring_drive(config, 0);
  const LocalDrive& d2 = ring_drive(config, 1);
  const LocalDrive& d3 = ring_drive(config, 2);
  const std::vector<std::tuple<const char*, const char*, cplx>> probe = {
      {"rge", "gge", phasor(d1.amplitude, d1.alpha)},
      {"reg", "geg", phasor(d2.amplitude, d2.beta)},
      {"erg", "egg", phasor(d2.amplitude, d2.alpha)},
      {"gre", "gge", phasor(d3.amplitude, d3.beta)},
      {"ger", "geg", phasor(d3.amplitude, d3.alpha)},
      {"egr", "egg", phasor(d1.amplitude, d1.beta)},
  };
  std::vector<Eigen::Triplet<cplx>> vp;
  for (const auto& [to, from, amp] : probe) {
    vp.emplace_back(static_cast<Eigen::Index>(idx(to)), static_cast<Eigen::Index>(idx(from)),
                    kTwoPi * amp);
  }
  SparseMat vpm(27, 27);
  vpm.setFromTriplets(vp.begin(), vp.end());
  out.vplus = Operator(std::move(vpm));
  return out;
}

cplx coupling_J(int bond, double omega, double delta, double omega_p, double alpha,
                double beta) {
  const double denom = delta * delta * delta - 2.0 * delta * omega_p * omega_p;
  if (std::abs(denom) <= kSingularityGuard) {
    throw SingularityError("coupling on bond " + std::to_string(bond) +
                           ": delta^3 - 2 delta omega_p^2 vanishes");
  }
  return std::polar(omega * omega * omega_p * omega_p / denom, alpha - beta);
}

double stark_term(double omega, double delta, double omega_p) {
  const double denom = delta * delta * delta - 2.0 * delta * omega_p * omega_p;
  if (std::abs(denom) <= kSingularityGuard) {
    throw SingularityError("Stark shift: delta^3 - 2 delta omega_p^2 vanishes");
  }
  return omega * omega * (delta * delta - omega_p * omega_p) / denom;
}

std::array<double, 3> stark_shifts(const ModelConfig& config) {
  require_ring_triangle(config, "Stark shifts");
  const double op = config.global_drives[0].amplitude;
  std::array<double, 3> s{};
  for (int j = 0; j < 3; ++j) {
    const LocalDrive& d = ring_drive(config, j);
    s[static_cast<std::size_t>(j)] = stark_term(d.amplitude, d.detuning, op);
  }
  return {s[0] + s[1], s[1] + s[2], s[0] + s[2]};
}

std::vector<double> ground_light_shifts(const ModelConfig& config) {
  config.validate();
  if (config.global_drives.size() != 1) {
    throw PreconditionError("light-shift compensation needs exactly one global field");
  }
  const double op = config.global_drives[0].amplitude;
  std::vector<double> per_site(static_cast<std::size_t>(config.n_atoms), 0.0);
  for (int s = 0; s < config.n_atoms; ++s) {
    const SiteLasers& lasers = config.site_lasers[static_cast<std::size_t>(s)];
    for (int k : {lasers.alpha_drive, lasers.beta_drive}) {
      if (k < 0) continue;
      const LocalDrive& d = config.local_drives[static_cast<std::size_t>(k)];
      if (d.amplitude == 0.0) continue;
      const double shift = stark_term(d.amplitude, d.detuning, op);
      for (int m = 0; m < config.n_atoms; ++m) {
        if (m != s) per_site[static_cast<std::size_t>(m)] += shift;
      }
    }
  }
  return per_site;
}

double wrap_phase(double phi) {
  double w = std::remainder(phi, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

double synthetic_flux(const std::vector<LocalDrive>& drives) {
  double phi = 0.0;
  for (const LocalDrive& d : drives) phi += d.alpha - d.beta;
  return wrap_phase(phi);
}

EffectiveModel effective_model(const ModelConfig& config) {
  require_ring_triangle(config, "effective model");
  const double op = config.global_drives[0].amplitude;
  EffectiveModel m;
  for (int j = 0; j < 3; ++j) {
    // Bond (j, j+1) is bridged by drive j+1.
    const LocalDrive& d = ring_drive(config, j + 1);
    m.hoppings[static_cast<std::size_t>(j)] =
        coupling_J(j + 1, d.amplitude, d.detuning, op, d.alpha, d.beta);
  }
  m.stark = stark_shifts(config);
  m.flux = synthetic_flux(config.local_drives);
  return m;
}

Operator build_effective_hamiltonian(const ModelConfig& config, bool include_stark) {
  const EffectiveModel m = effective_model(config);
  const std::array<std::size_t, 3> sites = {state_index("egg"), state_index("geg"),
                                            state_index("gge")};
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto from = static_cast<Eigen::Index>(sites[j]);
    const auto to = static_cast<Eigen::Index>(sites[(j + 1) % 3]);
    const cplx jj = kTwoPi * m.hoppings[j];
    trip.emplace_back(to, from, jj);
    trip.emplace_back(from, to, std::conj(jj));
    if (include_stark) trip.emplace_back(from, from, cplx(kTwoPi * m.stark[j]));
  }
  SparseMat h(27, 27);
  h.setFromTriplets(trip.begin(), trip.end());
  return Operator(std::move(h), true);
}

namespace {

void require_two_atom(const ModelConfig& config) {
  config.validate();
  if (config.n_atoms != 2) throw PreconditionError("two-atom model requires exactly two atoms");
  if (config.global_drives.size() != 1) {
    throw PreconditionError("two-atom model requires exactly one global field");
  }
  int drive = -1;
  for (const SiteLasers& s : config.site_lasers) {
    for (int k : {s.alpha_drive, s.beta_drive}) {
      if (k < 0) continue;
      if (drive >= 0 && k != drive) {
        throw PreconditionError("two-atom model requires a single local drive index");
      }
      drive = k;
    }
  }
}

}  // namespace

Operator build_two_atom_hamiltonian(const ModelConfig& config, double t_us) {
  require_two_atom(config);
  return build_full_hamiltonian(config, t_us);
}

Operator build_two_atom_static_hamiltonian(const ModelConfig& config) {
  require_two_atom(config);
  const GlobalDrive& g = config.global_drives[0];
  const Matrix3c rg = transition(Level::r, Level::g);
  const Matrix3c re = transition(Level::r, Level::e);
  SparseMat h = interaction_term(config);
  double frame_delta = 0.0;
  bool have_delta = false;
  for (int s = 0; s < 2; ++s) {
    const SiteLasers& lasers = config.site_lasers[static_cast<std::size_t>(s)];
    for (int which = 0; which < 2; ++which) {
      const int k = which == 0 ? lasers.alpha_drive : lasers.beta_drive;
      if (k < 0) continue;
      const LocalDrive& d = config.local_drives[static_cast<std::size_t>(k)];
      frame_delta = d.detuning;
      have_delta = true;
      const SparseMat up = embed(rg, s + 1, 2).matrix() *
                           (kTwoPi * phasor(d.amplitude, which == 0 ? d.alpha : d.beta));
      h += up;
      h += SparseMat(up.adjoint());
    }
  }
  if (!have_delta) throw PreconditionError("two-atom model has no local drive");
  for (int s = 0; s < 2; ++s) {
    const SparseMat pump = embed(re, s + 1, 2).matrix() * cplx(kTwoPi * g.amplitude);
    h += pump;
    h += SparseMat(pump.adjoint());
    h += embed(projector(Level::r), s + 1, 2).matrix() * cplx(-kTwoPi * frame_delta);
    h += embed(projector(Level::e), s + 1, 2).matrix() *
         cplx(kTwoPi * (g.detuning - frame_delta));
  }
  return Operator(std::move(h), true);
}

}  // namespace chiral
