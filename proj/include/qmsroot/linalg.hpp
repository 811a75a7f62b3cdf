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

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qmsroot/error.hpp"

namespace qmsroot {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

bool all_finite(const CMatrix& m);

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct HermEig {
  RVector values;   // ascending
  CMatrix vectors;  // column k belongs to values[k]
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian when
/// ||M - M*||_F > tol * ||M||_F and NoConvergence if the QR sweeps fail.
HermEig herm_eig(const CMatrix& m, double tol = 1e-10);

/// Smallest eigenvalue of a Hermitian matrix (no eigenvectors).
double min_eigenvalue(const CMatrix& m);

// ---------------------------------------------------------------------------
// Real sparse matrices

/// Row-compressed real matrix built from triplets. Duplicates are summed and
/// exact zeros dropped by finalize(); rows keep ascending column order.
class SparseRealMatrix {
 public:
  SparseRealMatrix() = default;
  SparseRealMatrix(int rows, int cols);

  void add(int row, int col, double value);
  void finalize();
  bool finalized() const { return finalized_; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long nnz() const { return static_cast<long>(values_.size()); }

  std::span<const int> row_cols(int r) const;
  std::span<const double> row_values(int r) const;

  RVector multiply(const RVector& x) const;
  RVector multiply_transpose(const RVector& y) const;
  double frobenius_norm() const;
  RMatrix to_dense() const;

 private:
  void require_finalized() const;

  struct Triplet {
    int row;
    int col;
    double value;
  };

  int rows_ = 0;
  int cols_ = 0;
  bool finalized_ = false;
  std::vector<Triplet> pending_;
  std::vector<long> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Real coordinates for Hermitian matrices

/// Coordinate layout for dim x dim Hermitian matrices: the dim diagonal
/// entries first, then for each p < q (row-major) the pair
/// (sqrt2 * Re H_pq, sqrt2 * Im H_pq). The map is an isometry from the
/// Frobenius inner product Re tr(P Q) to the Euclidean dot product.
class HermitianParam {
 public:
  HermitianParam() = default;
  explicit HermitianParam(int dim);

  int dim() const { return dim_; }
  int size() const { return dim_ * dim_; }

  int diag_index(int p) const { return p; }
  int re_index(int p, int q) const { return dim_ + 2 * pair_rank(p, q); }
  int im_index(int p, int q) const { return dim_ + 2 * pair_rank(p, q) + 1; }

  RVector encode(const CMatrix& h) const;
  CMatrix decode(const RVector& coords) const;

  /// encode(v v*) without forming the dense outer product.
  RVector encode_outer(const CVector& v) const;

 private:
  int pair_rank(int p, int q) const {
    return p * dim_ - p * (p + 1) / 2 + (q - p - 1);
  }

  int dim_ = 0;
};

// ---------------------------------------------------------------------------
// Rank-revealing least squares

/// Orthonormal basis stored as dense blocks on disjoint coordinate sets.
class BlockBasis {
 public:
  struct Block {
    std::vector<int> coords;
    RMatrix vectors;  // coords.size() x k, orthonormal columns
  };

  BlockBasis() = default;
  explicit BlockBasis(int ambient) : ambient_(ambient) {}

  void add_block(Block block);

  int ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// Orthogonal projection N N^T x.
  RVector project(const RVector& x) const;
  /// Inner products <g, N_k> for every basis vector, in basis order.
  RVector coefficients(const RVector& g) const;
  /// Basis vector k as a dense ambient vector.
  RVector vector(int k) const;
  std::vector<RVector> to_vectors() const;

 private:
  int ambient_ = 0;
  int dim_ = 0;
  std::vector<Block> blocks_;
};

/// Min-norm least-squares machinery for a finalized sparse matrix. Columns are
/// grouped into connected components of the row/column incidence graph and
/// each component gets a dense SVD; the numerical rank uses the threshold
/// rank_tol * max(1, ||A||_2).
class LeastSquaresFactor {
 public:
  LeastSquaresFactor(const SparseRealMatrix& a, double rank_tol = 1e-9);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int rank() const { return rank_; }
  int nullity() const { return cols_ - rank_; }
  double norm() const { return norm_; }
  double threshold() const { return threshold_; }
  double smallest_retained_sv() const { return smallest_kept_; }
  double largest_dropped_sv() const { return largest_dropped_; }
  int component_count() const { return static_cast<int>(components_.size()); }
  int largest_component_cols() const;

  /// Minimum-norm minimizer of ||A x - b||.
  RVector solve(const RVector& b) const;
  /// Minimum-norm minimizer of ||A^T z - g||.
  RVector solve_transpose(const RVector& g) const;

  const BlockBasis& null_basis() const { return null_basis_; }

 private:
  struct Component {
    std::vector<int> cols;
    std::vector<int> rows;
    RMatrix u;      // rows x rank
    RVector sigma;  // rank
    RMatrix v;      // cols x rank
  };

  int rows_ = 0;
  int cols_ = 0;
  int rank_ = 0;
  double norm_ = 0.0;
  double threshold_ = 0.0;
  double smallest_kept_ = 0.0;
  double largest_dropped_ = 0.0;
  std::vector<Component> components_;
  BlockBasis null_basis_;
};

struct LstsqResult {
  RVector x;
  double residual = 0.0;
};

LstsqResult lstsq_min_norm(const SparseRealMatrix& a, const RVector& b,
                           double rank_tol = 1e-9);

/// Orthonormal basis of ker A, one dense vector per basis element.
std::vector<RVector> nullspace(const SparseRealMatrix& a, double tol = 1e-9);

}  // namespace qmsroot
