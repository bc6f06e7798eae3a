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

#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

using namespace chiral;

namespace {

Eigen::MatrixXcd kron3(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                       const Eigen::MatrixXcd& c) {
  Eigen::MatrixXcd ab = Eigen::kroneckerProduct(a, b);
  return Eigen::kroneckerProduct(ab, c);
}

}  // namespace

TEST_CASE("basis dimension and ordering") {
  CHECK(hilbert_dim(1) == 3);
  CHECK(hilbert_dim(3) == 27);
  CHECK(hilbert_dim(6) == 729);
  CHECK_THROWS_AS(hilbert_dim(0), DimensionError);
  CHECK_THROWS_AS(hilbert_dim(kMaxAtoms + 1), DimensionError);

  const auto basis = build_basis(3);
  REQUIRE(basis.size() == 27);
  CHECK(basis.front().label() == "ggg");
  CHECK(basis.back().label() == "rrr");
  // The first atom is the most significant digit.
  CHECK(state_index("egg") == 9);
  CHECK(state_index("geg") == 3);
  CHECK(state_index("gge") == 1);
  CHECK(state_index("eg") == 3);
  CHECK(state_label(9, 3) == "egg");
  for (const auto& s : basis) CHECK(state_index(s.label()) == s.index);
  CHECK_THROWS(state_index("gxg"));
}

TEST_CASE("level round trip") {
  for (Level l : {Level::g, Level::e, Level::r}) CHECK(level_from_char(level_char(l)) == l);
  CHECK_THROWS(level_from_char('q'));
}

TEST_CASE("single-site operators") {
  const Matrix3c t = transition(Level::r, Level::g);
  CHECK(t(2, 0) == cplx(1.0));
  CHECK(t.cwiseAbs().sum() == doctest::Approx(1.0));
  const Matrix3c p = projector(Level::e);
  CHECK((p * p - p).norm() == doctest::Approx(0.0));
  CHECK(p.trace() == cplx(1.0));
}

TEST_CASE("embedding matches explicit Kronecker products") {
  const Matrix3c a = transition(Level::r, Level::e) + transition(Level::g, Level::r) * cplx(0.0, 2.0);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  CHECK((embed(a, 1, 3).dense() - kron3(a, id, id)).norm() < 1e-15);
  CHECK((embed(a, 2, 3).dense() - kron3(id, a, id)).norm() < 1e-15);
  CHECK((embed(a, 3, 3).dense() - kron3(id, id, a)).norm() < 1e-15);
  CHECK_THROWS(embed(a, 0, 3));
  CHECK_THROWS(embed(a, 4, 3));
  // Operators on different sites commute.
  const Operator x = embed(a, 1, 3), y = embed(a.adjoint(), 3, 3);
  CHECK(((x * y) - (y * x)).max_abs() < 1e-15);
}

TEST_CASE("operator algebra and hermiticity check") {
  const Operator h = embed(transition(Level::g, Level::r) + transition(Level::r, Level::g), 2, 3);
  CHECK(h.max_hermitian_defect() == 0.0);
  CHECK(h.nnz() == 18);
  CHECK(h.element(state_index("grg"), state_index("ggg")) == cplx(1.0));
  CHECK((h + h).max_abs() == doctest::Approx(2.0));
  CHECK((h - h).max_abs() == 0.0);
  CHECK(h.scaled(cplx(0.0, 3.0)).element(0, state_index("grg")) == cplx(0.0, 3.0));
  CHECK(Operator::identity(27).nnz() == 27);
  CHECK(Operator::zero(9).nnz() == 0);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(Operator::from_dense(bad, true), std::invalid_argument);
  CHECK_NOTHROW(Operator::from_dense(bad, false));
  CHECK(Operator::from_dense(bad).adjoint().element(1, 0) == cplx(1.0));
}

TEST_CASE("density matrices") {
  const DensityMatrix rho = DensityMatrix::pure(state_index("egg"), 27);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(rho.population(9) == 1.0);
  CHECK(rho.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rho.hermitian_defect() == 0.0);

  const DensityMatrix mixed = DensityMatrix::maximally_mixed(9);
  CHECK(mixed.min_eigenvalue() == doctest::Approx(1.0 / 9.0));

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(3);
  psi << 1.0, cplx(0.0, 1.0), 0.0;
  psi /= std::sqrt(2.0);
  const DensityMatrix coh = DensityMatrix::from_state(psi);
  CHECK(coh.matrix()(0, 1).real() == doctest::Approx(0.0));
  CHECK(coh.matrix()(0, 1).imag() == doctest::Approx(-0.5));

  // <sigma_y> of (|g> + i|e>)/sqrt(2) is +1.
  Matrix3c sy = Matrix3c::Zero();
  sy(0, 1) = cplx(0.0, -1.0);
  sy(1, 0) = cplx(0.0, 1.0);
  const Operator y(SparseMat(sy.sparseView()), true);
  CHECK(expectation(coh, y).real() == doctest::Approx(1.0));
  CHECK(expectation(coh, y).imag() == doctest::Approx(0.0));
}
