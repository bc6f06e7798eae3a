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

#include "chiral/dynamics.hpp"

#include "chiral/dissipation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chiral {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int atoms_for_dim(std::size_t dim) {
  int n = 0;
  std::size_t d = 1;
  while (d < dim) {
    d *= kLevels;
    ++n;
  }
  if (d != dim) throw std::invalid_argument("dimension is not a power of three");
  return n;
}

std::vector<std::size_t> tracked_indices(const IntegrationOptions& options, std::size_t dim) {
  if (!options.tracked.empty()) {
    for (std::size_t i : options.tracked) {
      if (i >= dim) throw std::out_of_range("tracked state outside the basis");
    }
    return options.tracked;
  }
  std::vector<std::size_t> all(dim);
  for (std::size_t i = 0; i < dim; ++i) all[i] = i;
  return all;
}

TimeSeries empty_series(const std::vector<std::size_t>& tracked, int n_atoms) {
  TimeSeries s;
  for (std::size_t i : tracked) s.labels.push_back(state_label(i, n_atoms));
  s.populations.resize(tracked.size());
  return s;
}

void record_density(TimeSeries& s, double t, const Eigen::MatrixXcd& rho,
                    const std::vector<std::size_t>& tracked, bool eval_positivity) {
  s.times.push_back(t);
  for (std::size_t k = 0; k < tracked.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(tracked[k]);
    s.populations[k].push_back(rho(i, i).real());
  }
  s.trace.push_back(rho.trace().real());
  s.hermitian_defect.push_back((rho - rho.adjoint()).cwiseAbs().maxCoeff());
  s.min_eig.push_back(eval_positivity ? DensityMatrix(rho).min_eigenvalue() : kNaN);
}

SparseMat decay_sum(const std::vector<SparseMat>& jumps, Eigen::Index dim) {
  SparseMat sum(dim, dim);
  for (const SparseMat& l : jumps) {
    const SparseMat ldag = l.adjoint();
    const SparseMat prod = ldag * l;
    sum += prod;
  }
  return sum;
}

// Fixed-step RK4 driver for dy/dt = f(t, y) with y a dense matrix.
template <class Rhs, class Sample>
void rk4_loop(Eigen::MatrixXcd y, const TimeGrid& grid, Rhs&& rhs, Sample&& sample) {
  const std::size_t steps = grid.n_steps();
  const double h = (grid.t_end - grid.t_start) / static_cast<double>(steps);
  Eigen::MatrixXcd k1(y.rows(), y.cols()), k2(y.rows(), y.cols()), k3(y.rows(), y.cols()),
      k4(y.rows(), y.cols()), tmp(y.rows(), y.cols());
  sample(grid.t_start, y);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = grid.t_start + h * static_cast<double>(n);
    rhs(t, y, k1, 0);
    tmp = y + (0.5 * h) * k1;
    rhs(t + 0.5 * h, tmp, k2, 1);
    tmp = y + (0.5 * h) * k2;
    rhs(t + 0.5 * h, tmp, k3, 2);
    tmp = y + h * k3;
    rhs(t + h, tmp, k4, 3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((n + 1) % grid.sample_stride == 0 || n + 1 == steps) {
      sample(grid.t_start + h * static_cast<double>(n + 1), y);
    }
  }
}

void check_grid(const TimeGrid& grid, double bound, std::size_t nnz, std::size_t dim) {
  if (!(grid.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(grid.t_end > grid.t_start)) throw std::invalid_argument("empty time window");
  if (grid.sample_stride == 0) throw std::invalid_argument("sample stride must be positive");
  if (grid.dt > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << grid.dt << " us exceeds the bound " << bound
        << " us (1/(" << kStepsPerPeriod << " f_max))";
    throw std::invalid_argument(msg.str());
  }
  const double steps = (grid.t_end - grid.t_start) / grid.dt;
  if (steps > kMaxFixedSteps) {
    // Four stages of sparse-times-dense products, a few flops per entry.
    const double flops = steps * 4.0 * 16.0 * static_cast<double>(nnz) * static_cast<double>(dim);
    std::ostringstream msg;
    msg << "fixed-step run needs " << steps << " steps (~" << flops / 1e9 / 60.0
        << " min at 1 GFLOP/s); use a static frame with the spectral propagator";
    throw CostGuardError(msg.str());
  }
}

}  // namespace

Frame frame_from_string(std::string_view name) {
  if (name == "full") return Frame::full;
  if (name == "rotated") return Frame::rotated;
  if (name == "effective") return Frame::effective;
  if (name == "two_atom") return Frame::two_atom;
  if (name == "two_atom_static") return Frame::two_atom_static;
  throw std::invalid_argument("unknown frame '" + std::string(name) + "'");
}

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::full: return "full";
    case Frame::rotated: return "rotated";
    case Frame::effective: return "effective";
    case Frame::two_atom: return "two_atom";
    case Frame::two_atom_static: return "two_atom_static";
  }
  return "unknown";
}

std::size_t TimeGrid::n_steps() const {
  const double span = t_end - t_start;
  if (!(dt > 0.0) || !(span > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
}

TimeGrid make_grid(double t_end, double sample_dt, double dt_max, double t_start) {
  if (!(sample_dt > 0.0) || !(dt_max > 0.0)) {
    throw std::invalid_argument("sampling interval and step must be positive");
  }
  if (!(t_end > t_start)) throw std::invalid_argument("empty time window");
  TimeGrid g;
  g.t_start = t_start;
  const double n_samples = std::ceil((t_end - t_start) / sample_dt - 1e-9);
  g.t_end = t_start + n_samples * sample_dt;
  g.sample_stride = static_cast<std::size_t>(std::max(1.0, std::ceil(sample_dt / dt_max - 1e-9)));
  g.dt = sample_dt / static_cast<double>(g.sample_stride);
  return g;
}

const std::vector<double>& TimeSeries::curve(std::string_view label) const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return populations[k];
  }
  throw std::out_of_range("series has no state '" + std::string(label) + "'");
}

bool TimeSeries::has(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

double MasterGenerator::max_frequency() const {
  double f = hamiltonian.max_frequency();
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hamiltonian.dim()));
  for (const SparseMat& l : jumps) {
    const SparseMat ll = SparseMat(l.adjoint()) * l;
    for (Eigen::Index r = 0; r < ll.outerSize(); ++r) {
      for (SparseMat::InnerIterator it(ll, r); it; ++it) rows(r) += std::abs(it.value());
    }
  }
  if (rows.size() > 0) f = std::max(f, rows.maxCoeff() / kTwoPi);
  return f > 0.0 ? f : 1e-300;
}

MasterGenerator make_generator(const ModelConfig& config, Frame frame) {
  config.validate();
  MasterGenerator gen;
  gen.n_atoms = config.n_atoms;
  std::vector<Operator> jumps;
  switch (frame) {
    case Frame::full:
      gen.hamiltonian = full_hamiltonian_terms(config);
      jumps = build_jump_ops(config);
      break;
    case Frame::rotated:
      gen.hamiltonian = rotated_hamiltonian_terms(config);
      jumps = build_jump_ops(config);
      break;
    case Frame::effective:
      // Stark terms are taken as cancelled by extra lasers.
      gen.hamiltonian = DrivenOperator(build_effective_hamiltonian(config, false).matrix(), {});
      jumps = build_effective_jump_ops(config);
      break;
    case Frame::two_atom:
      build_two_atom_hamiltonian(config, 0.0);  // layout checks only
      gen.hamiltonian = full_hamiltonian_terms(config);
      jumps = build_jump_ops(config);
      break;
    case Frame::two_atom_static:
      gen.hamiltonian = DrivenOperator(build_two_atom_static_hamiltonian(config).matrix(), {});
      jumps = build_jump_ops(config);
      break;
  }
  for (const Operator& l : jumps) {
    if (l.nnz() > 0) gen.jumps.push_back(l.matrix());
  }
  return gen;
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& h,
                           const std::vector<Operator>& jumps) {
  const std::size_t dim = rho.dim();
  if (h.dim() != dim) throw std::invalid_argument("lindblad_rhs: Hamiltonian dimension mismatch");
  const Eigen::MatrixXcd& r = rho.matrix();
  const cplx i(0.0, 1.0);
  Eigen::MatrixXcd out = -i * (h.matrix() * r - (h.matrix() * r.adjoint()).adjoint());
  for (const Operator& l : jumps) {
    if (l.dim() != dim) throw std::invalid_argument("lindblad_rhs: jump dimension mismatch");
    const SparseMat& lm = l.matrix();
    const SparseMat ll = SparseMat(lm.adjoint()) * lm;
    const Eigen::MatrixXcd lr = lm * r;
    out += (lm * lr.adjoint()).adjoint();
    out -= 0.5 * (ll * r + (ll * r.adjoint()).adjoint());
  }
  return DensityMatrix(std::move(out));
}

TimeSeries integrate_master(const MasterGenerator& gen, const DensityMatrix& rho0,
                            const TimeGrid& grid, const IntegrationOptions& options) {
  const std::size_t dim = gen.hamiltonian.dim();
  if (rho0.dim() != dim) throw std::invalid_argument("initial state dimension mismatch");
  const auto n = static_cast<Eigen::Index>(dim);

  // K = H - (i/2) sum L^dagger L shares the drive terms of H.
  const DrivenOperator k_op =
      gen.hamiltonian.with_static_added(decay_sum(gen.jumps, n) * cplx(0.0, -0.5));
  SparseMat k_t = k_op.pattern();
  check_grid(grid, gen.dt_bound(), static_cast<std::size_t>(k_t.nonZeros()), dim);

  const std::vector<std::size_t> tracked = tracked_indices(options, dim);
  TimeSeries series = empty_series(tracked, atoms_for_dim(dim));
  const std::size_t pstride = std::max<std::size_t>(1, options.positivity_stride);

  // Recycling term sum L rho L^dagger as one sparse map on column-major
  // vec(rho): entry (i + k n, j + l n) = L_ij conj(L_kl).
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const SparseMat& l : gen.jumps) {
    for (Eigen::Index r1 = 0; r1 < l.outerSize(); ++r1) {
      for (SparseMat::InnerIterator a(l, r1); a; ++a) {
        for (Eigen::Index r2 = 0; r2 < l.outerSize(); ++r2) {
          for (SparseMat::InnerIterator b(l, r2); b; ++b) {
            trip.emplace_back(a.row() + b.row() * n, a.col() + b.col() * n,
                              a.value() * std::conj(b.value()));
          }
        }
      }
    }
  }
  SparseMat recycle(n * n, n * n);
  recycle.setFromTriplets(trip.begin(), trip.end());

  // rho stays exactly hermitian, so -i(K rho - rho K^dagger) = Z + Z^dagger
  // with Z = -i K rho.
  Eigen::MatrixXcd z(n, n);
  const cplx minus_i(0.0, -1.0);
  double assembled_at = std::numeric_limits<double>::quiet_NaN();
  auto rhs = [&](double t, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, int) {
    if (!(t == assembled_at)) {
      k_op.assemble(t, k_t);
      assembled_at = t;
    }
    z.transpose().noalias() = rho.transpose() * k_t.transpose();
    z *= minus_i;
    out = z;
    out += z.adjoint();
    if (recycle.nonZeros() > 0) {
      Eigen::Map<Eigen::VectorXcd>(out.data(), n * n).noalias() +=
          recycle * Eigen::Map<const Eigen::VectorXcd>(rho.data(), n * n);
    }
  };
  std::size_t sample_no = 0;
  auto sample = [&](double t, const Eigen::MatrixXcd& rho) {
    const bool eval = options.check_positivity && sample_no % pstride == 0;
    record_density(series, t, rho, tracked, eval);
    ++sample_no;
  };
  if (rho0.hermitian_defect() > kOperatorHermitianTol) {
    throw std::invalid_argument("initial density matrix is not hermitian");
  }
  const Eigen::MatrixXcd start = 0.5 * (rho0.matrix() + rho0.matrix().adjoint());
  rk4_loop(start, grid, rhs, sample);
  return series;
}

TimeSeries integrate_fixed(const ModelConfig& config, const DensityMatrix& rho0,
                           const TimeGrid& grid, Frame frame, const IntegrationOptions& options) {
  return integrate_master(make_generator(config, frame), rho0, grid, options);
}

TimeSeries propagate_spectral(const Operator& h, const std::vector<Operator>& jumps,
                              const DensityMatrix& rho0, const std::vector<double>& sample_times,
                              const IntegrationOptions& options) {
  const std::size_t dim = h.dim();
  if (rho0.dim() != dim) throw std::invalid_argument("initial state dimension mismatch");
  if (dim * dim > 10000) {
    throw PreconditionError("superoperator of dimension " + std::to_string(dim * dim) +
                            " exceeds the 10000 guard");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  const auto n2 = n * n;
  const cplx i(0.0, 1.0);

  // Row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho).
  Eigen::MatrixXcd k = h.dense();
  std::vector<Eigen::MatrixXcd> ls;
  for (const Operator& l : jumps) {
    if (l.dim() != dim) throw std::invalid_argument("jump dimension mismatch");
    ls.push_back(l.dense());
    k -= 0.5 * i * ls.back().adjoint() * ls.back();
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  auto kron = [n, n2](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(n2, n2);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) out.block(r * n, c * n, n, n) = a(r, c) * b;
    }
    return out;
  };
  Eigen::MatrixXcd super = -i * kron(k, id) + i * kron(id, k.conjugate());
  for (const Eigen::MatrixXcd& l : ls) super += kron(l, l.conjugate());

  const std::vector<std::size_t> tracked = tracked_indices(options, dim);
  TimeSeries series = empty_series(tracked, atoms_for_dim(dim));
  const std::size_t pstride = std::max<std::size_t>(1, options.positivity_stride);

  Eigen::VectorXcd v(n2);
  for (Eigen::Index r = 0; r < n; ++r) v.segment(r * n, n) = rho0.matrix().row(r).transpose();

  double t_prev = 0.0;
  double cached_step = -1.0;
  Eigen::MatrixXcd step_map;
  Eigen::MatrixXcd rho(n, n);
  for (std::size_t s = 0; s < sample_times.size(); ++s) {
    const double t = sample_times[s];
    const double delta = t - t_prev;
    if (delta < 0.0) throw std::invalid_argument("sample times must be non-decreasing from 0");
    if (delta > 0.0) {
      if (std::abs(delta - cached_step) > 1e-12 * delta) {
        step_map = (super * delta).exp();
        cached_step = delta;
      }
      v = step_map * v;
    }
    t_prev = t;
    for (Eigen::Index r = 0; r < n; ++r) rho.row(r) = v.segment(r * n, n).transpose();
    const bool eval = options.check_positivity && s % pstride == 0;
    record_density(series, t, rho, tracked, eval);
  }
  return series;
}

TimeSeries evolve_unitary(const ModelConfig& config, const Eigen::VectorXcd& psi0,
                          const TimeGrid& grid, Frame frame, const IntegrationOptions& options) {
  if (config.decay.gamma != 0.0 || config.decay.gamma_dephase != 0.0) {
    throw PreconditionError("unitary evolution requires zero decay and dephasing rates");
  }
  const MasterGenerator gen = make_generator(config, frame);
  const std::size_t dim = gen.hamiltonian.dim();
  if (static_cast<std::size_t>(psi0.size()) != dim) {
    throw std::invalid_argument("initial state dimension mismatch");
  }
  SparseMat h_t = gen.hamiltonian.pattern();
  check_grid(grid, gen.dt_bound(), static_cast<std::size_t>(h_t.nonZeros()), 1);

  const std::vector<std::size_t> tracked = tracked_indices(options, dim);
  TimeSeries series = empty_series(tracked, atoms_for_dim(dim));
  const cplx minus_i(0.0, -1.0);
  double assembled_at = std::numeric_limits<double>::quiet_NaN();
  auto rhs = [&](double t, const Eigen::MatrixXcd& psi, Eigen::MatrixXcd& out, int) {
    if (!(t == assembled_at)) {
      gen.hamiltonian.assemble(t, h_t);
      assembled_at = t;
    }
    out.noalias() = minus_i * (h_t * psi);
  };
  auto sample = [&](double t, const Eigen::MatrixXcd& psi) {
    series.times.push_back(t);
    for (std::size_t k = 0; k < tracked.size(); ++k) {
      series.populations[k].push_back(std::norm(psi(static_cast<Eigen::Index>(tracked[k]), 0)));
    }
    series.trace.push_back(psi.squaredNorm());
    series.hermitian_defect.push_back(0.0);
    series.min_eig.push_back(kNaN);
  };
  rk4_loop(Eigen::MatrixXcd(psi0), grid, rhs, sample);
  return series;
}

InvariantReport check_invariants(const TimeSeries& series) {
  InvariantReport r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  r.min_population = std::numeric_limits<double>::infinity();
  r.max_population = -std::numeric_limits<double>::infinity();
  for (double tr : series.trace) r.max_trace_error = std::max(r.max_trace_error, std::abs(tr - 1.0));
  for (double h : series.hermitian_defect) r.max_hermitian_defect = std::max(r.max_hermitian_defect, h);
  for (double e : series.min_eig) {
    if (!std::isnan(e)) r.min_eigenvalue = std::min(r.min_eigenvalue, e);
  }
  for (const auto& curve : series.populations) {
    for (double p : curve) {
      r.min_population = std::min(r.min_population, p);
      r.max_population = std::max(r.max_population, p);
    }
  }
  r.trace_ok = r.max_trace_error < 1e-6;
  r.hermitian_ok = r.max_hermitian_defect < 1e-9;
  r.positivity_ok = !(r.min_eigenvalue < -1e-6);
  r.populations_ok = r.min_population >= -1e-6 && r.max_population <= 1.0 + 1e-6;
  return r;
}

}  // namespace chiral
