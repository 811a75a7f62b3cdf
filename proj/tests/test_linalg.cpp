// Copyright 2026 The qmsroot Authors
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

#include <doctest.h>

#include <cmath>

#include "qmsroot/linalg.hpp"
#include "qmsroot/random.hpp"

using namespace qmsroot;

namespace {

SparseRealMatrix from_dense(const RMatrix& d) {
  SparseRealMatrix s(static_cast<int>(d.rows()), static_cast<int>(d.cols()));
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) s.add(i, j, d(i, j));
  s.finalize();
  return s;
}

// Block-structured random matrix with a planted rank deficiency.
RMatrix planted(Rng& rng, int rows, int cols) {
  RMatrix d = RMatrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const int block = i % 3;
    for (int j = block; j < cols; j += 3) d(i, j) = rng.normal();
  }
  // duplicate a column combination so the rank drops
  d.col(cols - 1) = d.col(cols - 4) * 2.0;
  return d;
}

}  // namespace

TEST_CASE("herm_eig on a hand-sized matrix") {
  CMatrix m(2, 2);
  m << 2.0, cplx(0, 1), cplx(0, -1), 2.0;
  const HermEig e = herm_eig(m);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));
  const CMatrix back = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  CHECK((back - m).norm() < 1e-14);
  CHECK(min_eigenvalue(m) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig rejects non-Hermitian and non-finite input") {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(herm_eig(m), Error);
  try {
    herm_eig(m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(herm_eig(bad), Error);
  CHECK_THROWS_AS(herm_eig(CMatrix::Zero(2, 3)), Error);
}

TEST_CASE("sparse matrix merges duplicates and drops cancellations") {
  SparseRealMatrix s(2, 3);
  s.add(1, 2, 1.5);
  s.add(0, 1, 2.0);
  s.add(1, 2, -1.5);
  s.add(0, 1, 1.0);
  s.add(0, 0, -4.0);
  s.finalize();
  CHECK(s.nnz() == 2);
  CHECK(s.row_cols(0).size() == 2);
  CHECK(s.row_cols(0)[0] == 0);
  CHECK(s.row_values(0)[1] == 3.0);
  CHECK(s.row_cols(1).empty());
  RVector x(3);
  x << 1.0, 2.0, 3.0;
  const RVector y = s.multiply(x);
  CHECK(y[0] == 2.0);
  CHECK(y[1] == 0.0);
  RVector z(2);
  z << 1.0, 1.0;
  const RVector t = s.multiply_transpose(z);
  CHECK(t[0] == -4.0);
  CHECK(t[1] == 3.0);
  CHECK(s.frobenius_norm() == doctest::Approx(5.0));
  CHECK_THROWS_AS(s.add(2, 0, 1.0), Error);
}

TEST_CASE("HermitianParam is an isometry") {
  Rng rng(11);
  for (int dim : {1, 2, 5, 16}) {
    const HermitianParam layout(dim);
    CHECK(layout.size() == dim * dim);
    for (int t = 0; t < 10; ++t) {
      const CMatrix p = rng.hermitian(dim);
      const CMatrix q = rng.hermitian(dim);
      const RVector ep = layout.encode(p);
      const RVector eq = layout.encode(q);
      const double frob = (p * q).trace().real();
      CHECK(std::abs(ep.dot(eq) - frob) <= 1e-12 * std::max(1.0, std::abs(frob)));
      CHECK((layout.decode(ep) - p).norm() <= 1e-12 * p.norm());
    }
  }
}

TEST_CASE("HermitianParam coordinate order") {
  const HermitianParam layout(3);
  CHECK(layout.diag_index(2) == 2);
  CHECK(layout.re_index(0, 1) == 3);
  CHECK(layout.im_index(0, 1) == 4);
  CHECK(layout.re_index(0, 2) == 5);
  CHECK(layout.re_index(1, 2) == 7);
  CHECK(layout.im_index(1, 2) == 8);
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 1) = cplx(1.0, 2.0);
  h(1, 0) = cplx(1.0, -2.0);
  const RVector e = layout.encode(h);
  CHECK(e[3] == doctest::Approx(std::sqrt(2.0)));
  CHECK(e[4] == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("encode_outer matches the dense outer product") {
  Rng rng(5);
  const HermitianParam layout(7);
  for (int t = 0; t < 5; ++t) {
    const CVector v = rng.complex_matrix(7, 1).col(0);
    const RVector a = layout.encode_outer(v);
    const RVector b = layout.encode(v * v.adjoint());
    CHECK((a - b).norm() <= 1e-13 * b.norm());
  }
}

TEST_CASE("min-norm least squares agrees with a dense orthogonal decomposition") {
  Rng rng(3);
  for (auto [rows, cols] : {std::pair{30, 12}, std::pair{9, 15}, std::pair{40, 40}}) {
    const RMatrix d = planted(rng, rows, cols);
    const SparseRealMatrix s = from_dense(d);
    RVector b(rows);
    for (int i = 0; i < rows; ++i) b[i] = rng.normal();

    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(d);
    cod.setThreshold(1e-10);
    const RVector oracle = cod.solve(b);

    const LstsqResult got = lstsq_min_norm(s, b);
    CHECK((got.x - oracle).norm() <= 1e-9 * std::max(1.0, oracle.norm()));
    CHECK(got.residual == doctest::Approx((d * oracle - b).norm()).epsilon(1e-9));

    const LeastSquaresFactor f(s);
    CHECK(f.rank() == cod.rank());
    CHECK(f.nullity() == cols - cod.rank());
    const Eigen::JacobiSVD<RMatrix> svd(d);
    CHECK(f.norm() == doctest::Approx(svd.singularValues()[0]).epsilon(1e-12));
  }
}

TEST_CASE("nullspace basis is orthonormal and annihilated") {
  Rng rng(8);
  const RMatrix d = planted(rng, 10, 18);
  const SparseRealMatrix s = from_dense(d);
  const auto basis = nullspace(s);
  Eigen::FullPivLU<RMatrix> lu(d);
  CHECK(static_cast<int>(basis.size()) == lu.dimensionOfKernel());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK((d * basis[i]).norm() < 1e-12);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      CHECK(std::abs(basis[i].dot(basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("transpose solve reaches vectors in the row space") {
  Rng rng(21);
  const RMatrix d = planted(rng, 25, 14);
  const SparseRealMatrix s = from_dense(d);
  const LeastSquaresFactor f(s);
  RVector z0(25);
  for (int i = 0; i < 25; ++i) z0[i] = rng.normal();
  const RVector g = d.transpose() * z0;
  const RVector z = f.solve_transpose(g);
  CHECK((d.transpose() * z - g).norm() <= 1e-10 * g.norm());

  // projection onto ker A zeroes any row-space vector
  CHECK(f.null_basis().project(g).norm() <= 1e-10 * g.norm());
  const RVector c = f.null_basis().coefficients(g);
  CHECK(c.size() == f.nullity());
}

TEST_CASE("independent components are detected") {
  // two decoupled 2x2 blocks
  RMatrix d = RMatrix::Zero(4, 4);
  d << 1, 2, 0, 0, 2, 4, 0, 0, 0, 0, 1, 0, 0, 0, 0, 3;
  const LeastSquaresFactor f(from_dense(d));
  CHECK(f.component_count() == 3);
  CHECK(f.rank() == 3);
  CHECK(f.largest_component_cols() == 2);
  CHECK(f.nullity() == 1);
  const RVector n0 = f.null_basis().vector(0);
  CHECK(std::abs(std::abs(n0[0]) - 2.0 / std::sqrt(5.0)) < 1e-14);
}
