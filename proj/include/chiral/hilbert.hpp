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

// hilbert.hpp: product basis of three-level atoms and sparse operator algebra.
//
// Canonical ordering: atom 1 is the most significant base-3 digit and the
// level digits are g=0, e=1, r=2. Every other module and the CSV output
// depend on this ordering.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

using cplx = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Matrix3c = Eigen::Matrix3cd;

inline constexpr int kLevels = 3;
inline constexpr int kMaxAtoms = 8;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Tolerance on |A - A^dagger| for operators flagged hermitian.
inline constexpr double kOperatorHermitianTol = 1e-12;

enum class Level : int { g = 0, e = 1, r = 2 };

char level_char(Level level);
Level level_from_char(char c);

// Thrown for atom counts outside [1, kMaxAtoms].
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BasisState {
  std::vector<Level> levels;
  std::size_t index = 0;

  std::string label() const;
};

std::size_t hilbert_dim(int n_atoms);
std::vector<BasisState> build_basis(int n_atoms);
BasisState state_from_index(std::size_t index, int n_atoms);
// Parses a level string such as "egg"; the atom count is its length.
std::size_t state_index(std::string_view label);
std::string state_label(std::size_t index, int n_atoms);

// |a><b| on a single atom.
Matrix3c transition(Level a, Level b);
Matrix3c projector(Level k);

class Operator {
 public:
  Operator() = default;
  // Throws std::invalid_argument when the matrix is not square, or when
  // hermitian_hint is set and the matrix fails the hermiticity check.
  explicit Operator(SparseMat matrix, bool hermitian_hint = false);

  static Operator zero(std::size_t dim);
  static Operator identity(std::size_t dim);
  static Operator from_dense(const Eigen::MatrixXcd& dense,
                             bool hermitian_hint = false);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const SparseMat& matrix() const { return m_; }
  bool hermitian_hint() const { return hermitian_; }
  std::size_t nnz() const;
  cplx element(std::size_t row, std::size_t col) const;
  Eigen::MatrixXcd dense() const;
  Operator adjoint() const;
  double max_hermitian_defect() const;
  double max_abs() const;

  Operator operator+(const Operator& other) const;
  Operator operator-(const Operator& other) const;
  Operator operator*(const Operator& other) const;
  Operator scaled(cplx factor) const;

 private:
  SparseMat m_;
  bool hermitian_ = false;
};

// identity x ... x local_op (at 1-based site) x ... x identity.
Operator embed(const Matrix3c& local_op, int site, int n_atoms);
// Projector onto a single canonical basis state.
Operator basis_projector(std::size_t index, std::size_t dim);

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix pure(std::size_t index, std::size_t dim);
  static DensityMatrix from_state(const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::MatrixXcd& matrix() { return rho_; }

  cplx trace() const { return rho_.trace(); }
  double hermitian_defect() const;
  // Smallest eigenvalue of the hermitian part.
  double min_eigenvalue() const;
  double population(std::size_t index) const { return rho_(index, index).real(); }

 private:
  Eigen::MatrixXcd rho_;
};

// trace(obs * rho).
cplx expectation(const DensityMatrix& rho, const Operator& obs);

}  // namespace chiral
