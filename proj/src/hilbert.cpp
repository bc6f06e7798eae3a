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

#include "chiral/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace chiral {

char level_char(Level level) {
  switch (level) {
    case Level::g: return 'g';
    case Level::e: return 'e';
    case Level::r: return 'r';
  }
  return '?';
}

Level level_from_char(char c) {
  switch (c) {
    case 'g': return Level::g;
    case 'e': return Level::e;
    case 'r': return Level::r;
    default:
      throw std::invalid_argument(std::string("unknown level '") + c + "'");
  }
}

std::string BasisState::label() const {
  std::string out;
  out.reserve(levels.size());
  for (Level l : levels) out.push_back(level_char(l));
  return out;
}

std::size_t hilbert_dim(int n_atoms) {
  if (n_atoms < 1 || n_atoms > kMaxAtoms) {
    throw DimensionError("atom count " + std::to_string(n_atoms) +
                         " outside [1, " + std::to_string(kMaxAtoms) + "]");
  }
  std::size_t dim = 1;
  for (int i = 0; i < n_atoms; ++i) dim *= kLevels;
  return dim;
}

BasisState state_from_index(std::size_t index, int n_atoms) {
  const std::size_t dim = hilbert_dim(n_atoms);
  if (index >= dim) throw std::out_of_range("basis index out of range");
  BasisState s;
  s.index = index;
  s.levels.resize(static_cast<std::size_t>(n_atoms));
  for (int a = n_atoms - 1; a >= 0; --a) {
    s.levels[static_cast<std::size_t>(a)] = static_cast<Level>(index % kLevels);
    index /= kLevels;
  }
  return s;
}

std::vector<BasisState> build_basis(int n_atoms) {
  const std::size_t dim = hilbert_dim(n_atoms);
  std::vector<BasisState> basis;
  basis.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) basis.push_back(state_from_index(i, n_atoms));
  return basis;
}

std::size_t state_index(std::string_view label) {
  hilbert_dim(static_cast<int>(label.size()));
  std::size_t index = 0;
  for (char c : label) index = index * kLevels + static_cast<std::size_t>(level_from_char(c));
  return index;
}

std::string state_label(std::size_t index, int n_atoms) {
  return state_from_index(index, n_atoms).label();
}

Matrix3c transition(Level a, Level b) {
  Matrix3c m = Matrix3c::Zero();
  m(static_cast<int>(a), static_cast<int>(b)) = 1.0;
  return m;
}

Matrix3c projector(Level k) { return transition(k, k); }

Operator::Operator(SparseMat matrix, bool hermitian_hint)
    : m_(std::move(matrix)), hermitian_(hermitian_hint) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("operator must be square");
  m_.makeCompressed();
  if (hermitian_) {
    const double defect = max_hermitian_defect();
    if (defect >= kOperatorHermitianTol) {
      throw std::invalid_argument("operator flagged hermitian has defect " +
                                  std::to_string(defect));
    }
  }
}

Operator Operator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Operator(SparseMat(n, n), true);
}

Operator Operator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  SparseMat m(n, n);
  m.setIdentity();
  return Operator(std::move(m), true);
}

Operator Operator::from_dense(const Eigen::MatrixXcd& dense, bool hermitian_hint) {
  return Operator(SparseMat(dense.sparseView(0.0, 0.0)), hermitian_hint);
}

std::size_t Operator::nnz() const {
  std::size_t count = 0;
  for (Eigen::Index k = 0; k < m_.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m_, k); it; ++it) {
      if (it.value() != cplx(0.0)) ++count;
    }
  }
  return count;
}

cplx Operator::element(std::size_t row, std::size_t col) const {
  return m_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

Eigen::MatrixXcd Operator::dense() const { return Eigen::MatrixXcd(m_); }

Operator Operator::adjoint() const {
  return Operator(SparseMat(m_.adjoint()), hermitian_);
}

double Operator::max_hermitian_defect() const {
  const SparseMat diff = m_ - SparseMat(m_.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

double Operator::max_abs() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < m_.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m_, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

Operator Operator::operator+(const Operator& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("operator dimension mismatch");
  return Operator(SparseMat(m_ + other.m_));
}

Operator Operator::operator-(const Operator& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("operator dimension mismatch");
  return Operator(SparseMat(m_ - other.m_));
}

Operator Operator::operator*(const Operator& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("operator dimension mismatch");
  return Operator(SparseMat(m_ * other.m_));
}

Operator Operator::scaled(cplx factor) const {
  return Operator(SparseMat(m_ * factor));
}

Operator embed(const Matrix3c& local_op, int site, int n_atoms) {
  const std::size_t dim = hilbert_dim(n_atoms);
  if (site < 1 || site > n_atoms) {
    throw std::out_of_range("site " + std::to_string(site) + " outside [1, " +
                            std::to_string(n_atoms) + "]");
  }
  // Index = prefix * 3^(n-site+1) + level * 3^(n-site) + suffix.
  std::size_t stride = 1;
  for (int a = site; a < n_atoms; ++a) stride *= kLevels;
  const std::size_t n_prefix = dim / (stride * kLevels);

  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int a = 0; a < kLevels; ++a) {
    for (int b = 0; b < kLevels; ++b) {
      const cplx v = local_op(a, b);
      if (v == cplx(0.0)) continue;
      for (std::size_t p = 0; p < n_prefix; ++p) {
        const std::size_t base = p * stride * kLevels;
        for (std::size_t s = 0; s < stride; ++s) {
          triplets.emplace_back(static_cast<Eigen::Index>(base + a * stride + s),
                                static_cast<Eigen::Index>(base + b * stride + s), v);
        }
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(dim);
  SparseMat m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  const bool herm = (local_op - local_op.adjoint()).cwiseAbs().maxCoeff() < kOperatorHermitianTol;
  return Operator(std::move(m), herm);
}

Operator basis_projector(std::size_t index, std::size_t dim) {
  if (index >= dim) throw std::out_of_range("basis index out of range");
  const auto n = static_cast<Eigen::Index>(dim);
  SparseMat m(n, n);
  m.insert(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return Operator(std::move(m), true);
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : rho_(std::move(entries)) {
  if (rho_.rows() != rho_.cols()) throw std::invalid_argument("density matrix must be square");
}

DensityMatrix DensityMatrix::pure(std::size_t index, std::size_t dim) {
  if (index >= dim) throw std::out_of_range("basis index out of range");
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_state(const Eigen::VectorXcd& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(dim));
}

double DensityMatrix::hermitian_defect() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

cplx expectation(const DensityMatrix& rho, const Operator& obs) {
  if (rho.dim() != obs.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  const SparseMat& o = obs.matrix();
  const Eigen::MatrixXcd& r = rho.matrix();
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < o.outerSize(); ++i) {
    for (SparseMat::InnerIterator it(o, i); it; ++it) acc += it.value() * r(it.col(), i);
  }
  return acc;
}

}  // namespace chiral
