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

#include "qmsroot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/SVD>

namespace qmsroot {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // smaller index becomes the root so the grouping is order-stable
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

HermEig herm_eig(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "herm_eig: matrix is not square");
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::InvalidInput, "herm_eig: non-finite entry");
  }
  const double norm = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol * norm) {
    throw Error(ErrorCode::NotHermitian,
                "herm_eig: ||M - M*||_F = " + std::to_string(asym) +
                    " exceeds tolerance");
  }
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "herm_eig: eigensolver did not converge");
  }
  return HermEig{solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "min_eigenvalue: eigensolver did not converge");
  }
  return solver.eigenvalues().size() ? solver.eigenvalues()(0) : 0.0;
}

// ---------------------------------------------------------------------------

SparseRealMatrix::SparseRealMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorCode::DimensionMismatch, "SparseRealMatrix: negative shape");
  }
}

void SparseRealMatrix::add(int row, int col, double value) {
  if (finalized_) {
    throw Error(ErrorCode::InvalidInput, "SparseRealMatrix: add after finalize");
  }
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw Error(ErrorCode::IndexOutOfRange, "SparseRealMatrix: triplet out of range");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidInput, "SparseRealMatrix: non-finite value");
  }
  pending_.push_back({row, col, value});
}

void SparseRealMatrix::finalize() {
  if (finalized_) return;
  std::stable_sort(pending_.begin(), pending_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(rows_ + 1, 0);
  col_idx_.clear();
  values_.clear();
  std::size_t i = 0;
  while (i < pending_.size()) {
    const int r = pending_[i].row;
    const int c = pending_[i].col;
    double sum = 0.0;
    while (i < pending_.size() && pending_[i].row == r && pending_[i].col == c) {
      sum += pending_[i].value;
      ++i;
    }
    if (sum != 0.0) {
      col_idx_.push_back(c);
      values_.push_back(sum);
      ++row_ptr_[r + 1];
    }
  }
  for (int r = 0; r < rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  pending_.clear();
  pending_.shrink_to_fit();
  finalized_ = true;
}

void SparseRealMatrix::require_finalized() const {
  if (!finalized_) {
    throw Error(ErrorCode::InvalidInput, "SparseRealMatrix: not finalized");
  }
}

std::span<const int> SparseRealMatrix::row_cols(int r) const {
  require_finalized();
  return {col_idx_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
}

std::span<const double> SparseRealMatrix::row_values(int r) const {
  require_finalized();
  return {values_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
}

RVector SparseRealMatrix::multiply(const RVector& x) const {
  require_finalized();
  if (x.size() != cols_) {
    throw Error(ErrorCode::DimensionMismatch, "SparseRealMatrix::multiply: size mismatch");
  }
  RVector y = RVector::Zero(rows_);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (long k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
    y[r] = acc;
  }
  return y;
}

RVector SparseRealMatrix::multiply_transpose(const RVector& y) const {
  require_finalized();
  if (y.size() != rows_) {
    throw Error(ErrorCode::DimensionMismatch,
                "SparseRealMatrix::multiply_transpose: size mismatch");
  }
  RVector x = RVector::Zero(cols_);
  for (int r = 0; r < rows_; ++r) {
    if (y[r] == 0.0) continue;
    for (long k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) x[col_idx_[k]] += values_[k] * y[r];
  }
  return x;
}

double SparseRealMatrix::frobenius_norm() const {
  require_finalized();
  double acc = 0.0;
  for (double v : values_) acc += v * v;
  return std::sqrt(acc);
}

RMatrix SparseRealMatrix::to_dense() const {
  require_finalized();
  RMatrix d = RMatrix::Zero(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (long k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) = values_[k];
  }
  return d;
}

// ---------------------------------------------------------------------------

HermitianParam::HermitianParam(int dim) : dim_(dim) {
  if (dim <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianParam: dimension must be positive");
  }
}

RVector HermitianParam::encode(const CMatrix& h) const {
  if (h.rows() != dim_ || h.cols() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianParam::encode: wrong shape");
  }
  RVector x(size());
  for (int p = 0; p < dim_; ++p) x[p] = h(p, p).real();
  int k = dim_;
  for (int p = 0; p < dim_; ++p) {
    for (int q = p + 1; q < dim_; ++q) {
      x[k++] = kSqrt2 * h(p, q).real();
      x[k++] = kSqrt2 * h(p, q).imag();
    }
  }
  return x;
}

CMatrix HermitianParam::decode(const RVector& coords) const {
  if (coords.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianParam::decode: wrong length");
  }
  CMatrix h(dim_, dim_);
  for (int p = 0; p < dim_; ++p) h(p, p) = coords[p];
  int k = dim_;
  for (int p = 0; p < dim_; ++p) {
    for (int q = p + 1; q < dim_; ++q) {
      const cplx z(coords[k] / kSqrt2, coords[k + 1] / kSqrt2);
      h(p, q) = z;
      h(q, p) = std::conj(z);
      k += 2;
    }
  }
  return h;
}

RVector HermitianParam::encode_outer(const CVector& v) const {
  if (v.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianParam::encode_outer: wrong length");
  }
  std::vector<int> support;
  for (int p = 0; p < dim_; ++p) {
    if (v[p] != cplx(0.0, 0.0)) support.push_back(p);
  }
  RVector x = RVector::Zero(size());
  for (std::size_t a = 0; a < support.size(); ++a) {
    const int p = support[a];
    x[p] = std::norm(v[p]);
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      const int q = support[b];
      const cplx z = v[p] * std::conj(v[q]);
      x[re_index(p, q)] = kSqrt2 * z.real();
      x[im_index(p, q)] = kSqrt2 * z.imag();
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

void BlockBasis::add_block(Block block) {
  if (block.vectors.rows() != static_cast<Eigen::Index>(block.coords.size())) {
    throw Error(ErrorCode::DimensionMismatch, "BlockBasis: block shape mismatch");
  }
  dim_ += static_cast<int>(block.vectors.cols());
  blocks_.push_back(std::move(block));
}

RVector BlockBasis::project(const RVector& x) const {
  RVector out = RVector::Zero(ambient_);
  for (const Block& b : blocks_) {
    RVector local(b.coords.size());
    for (std::size_t i = 0; i < b.coords.size(); ++i) local[i] = x[b.coords[i]];
    const RVector proj = b.vectors * (b.vectors.transpose() * local);
    for (std::size_t i = 0; i < b.coords.size(); ++i) out[b.coords[i]] = proj[i];
  }
  return out;
}

RVector BlockBasis::coefficients(const RVector& g) const {
  RVector out(dim_);
  int k = 0;
  for (const Block& b : blocks_) {
    RVector local(b.coords.size());
    for (std::size_t i = 0; i < b.coords.size(); ++i) local[i] = g[b.coords[i]];
    const RVector c = b.vectors.transpose() * local;
    out.segment(k, c.size()) = c;
    k += static_cast<int>(c.size());
  }
  return out;
}

RVector BlockBasis::vector(int k) const {
  if (k < 0 || k >= dim_) {
    throw Error(ErrorCode::IndexOutOfRange, "BlockBasis::vector: index out of range");
  }
  for (const Block& b : blocks_) {
    if (k < b.vectors.cols()) {
      RVector out = RVector::Zero(ambient_);
      for (std::size_t i = 0; i < b.coords.size(); ++i) out[b.coords[i]] = b.vectors(i, k);
      return out;
    }
    k -= static_cast<int>(b.vectors.cols());
  }
  return RVector::Zero(ambient_);
}

std::vector<RVector> BlockBasis::to_vectors() const {
  std::vector<RVector> out;
  out.reserve(dim_);
  for (int k = 0; k < dim_; ++k) out.push_back(vector(k));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Pending {
  RMatrix u;
  RVector sigma;
  RMatrix v;
};

// Backward error of a thin SVD, plus loss of orthogonality in U and V.
double svd_defect(const RMatrix& a, const Pending& p) {
  const Eigen::Index k = p.sigma.size();
  const RMatrix uk = p.u.leftCols(k);
  const double fit = (a - uk * p.sigma.asDiagonal() * p.v.leftCols(k).transpose()).norm();
  const double scale = std::max(1.0, a.norm());
  const double orth_u = (uk.transpose() * uk - RMatrix::Identity(k, k)).norm();
  const double orth_v = (p.v.transpose() * p.v - RMatrix::Identity(p.v.cols(), p.v.cols())).norm();
  return std::max({fit / scale, orth_u, orth_v});
}

// Divide-and-conquer SVD is fast but loses accuracy on some highly
// degenerate blocks; those are redone with one-sided Jacobi.
Pending decompose(const RMatrix& dense) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double limit = 64.0 * eps * static_cast<double>(dense.rows() + dense.cols());
  Eigen::BDCSVD<RMatrix> fast(dense, Eigen::ComputeThinU | Eigen::ComputeFullV);
  if (fast.info() == Eigen::Success) {
    Pending p{fast.matrixU(), fast.singularValues(), fast.matrixV()};
    if (svd_defect(dense, p) <= limit) return p;
  }
  Eigen::JacobiSVD<RMatrix> slow(dense, Eigen::ComputeThinU | Eigen::ComputeFullV);
  Pending p{slow.matrixU(), slow.singularValues(), slow.matrixV()};
  if (slow.info() != Eigen::Success || svd_defect(dense, p) > limit) {
    throw Error(ErrorCode::NoConvergence, "LeastSquaresFactor: SVD did not converge");
  }
  return p;
}

}  // namespace

LeastSquaresFactor::LeastSquaresFactor(const SparseRealMatrix& a, double rank_tol)
    : rows_(a.rows()), cols_(a.cols()), null_basis_(a.cols()) {
  if (!a.finalized()) {
    throw Error(ErrorCode::InvalidInput, "LeastSquaresFactor: matrix not finalized");
  }
  DisjointSets sets(cols_);
  for (int r = 0; r < rows_; ++r) {
    const auto cols = a.row_cols(r);
    for (std::size_t k = 1; k < cols.size(); ++k) sets.unite(cols[0], cols[k]);
  }

  std::vector<int> comp_of_root(cols_, -1);
  std::vector<int> comp_of_col(cols_);
  for (int c = 0; c < cols_; ++c) {
    const int root = sets.find(c);
    if (comp_of_root[root] < 0) {
      comp_of_root[root] = static_cast<int>(components_.size());
      components_.emplace_back();
    }
    comp_of_col[c] = comp_of_root[root];
    components_[comp_of_col[c]].cols.push_back(c);
  }
  for (int r = 0; r < rows_; ++r) {
    const auto cols = a.row_cols(r);
    if (!cols.empty()) components_[comp_of_col[cols[0]]].rows.push_back(r);
  }

  // Full SVDs first; the rank threshold depends on the global norm.
  std::vector<Pending> svds(components_.size());
  std::vector<int> local(cols_, -1);
  for (std::size_t ci = 0; ci < components_.size(); ++ci) {
    Component& comp = components_[ci];
    const int k = static_cast<int>(comp.cols.size());
    const int r = static_cast<int>(comp.rows.size());
    if (r == 0) {
      svds[ci].v = RMatrix::Identity(k, k);
      continue;
    }
    for (int j = 0; j < k; ++j) local[comp.cols[j]] = j;
    RMatrix dense = RMatrix::Zero(r, k);
    for (int i = 0; i < r; ++i) {
      const auto cols = a.row_cols(comp.rows[i]);
      const auto vals = a.row_values(comp.rows[i]);
      for (std::size_t t = 0; t < cols.size(); ++t) dense(i, local[cols[t]]) = vals[t];
    }
    svds[ci] = decompose(dense);
    if (svds[ci].sigma.size()) norm_ = std::max(norm_, svds[ci].sigma[0]);
  }

  threshold_ = rank_tol * std::max(1.0, norm_);
  smallest_kept_ = 0.0;
  bool have_kept = false;
  for (std::size_t ci = 0; ci < components_.size(); ++ci) {
    Component& comp = components_[ci];
    Pending& p = svds[ci];
    int rank = 0;
    while (rank < p.sigma.size() && p.sigma[rank] > threshold_) ++rank;
    for (int t = rank; t < p.sigma.size(); ++t) {
      largest_dropped_ = std::max(largest_dropped_, p.sigma[t]);
    }
    if (rank > 0) {
      const double s = p.sigma[rank - 1];
      smallest_kept_ = have_kept ? std::min(smallest_kept_, s) : s;
      have_kept = true;
    }
    rank_ += rank;
    comp.u = p.u.leftCols(rank);
    comp.sigma = p.sigma.head(rank);
    comp.v = p.v.leftCols(rank);
    const int k = static_cast<int>(comp.cols.size());
    if (rank < k) {
      null_basis_.add_block({comp.cols, p.v.rightCols(k - rank)});
    }
  }
}

int LeastSquaresFactor::largest_component_cols() const {
  std::size_t best = 0;
  for (const Component& c : components_) best = std::max(best, c.cols.size());
  return static_cast<int>(best);
}

RVector LeastSquaresFactor::solve(const RVector& b) const {
  if (b.size() != rows_) {
    throw Error(ErrorCode::DimensionMismatch, "LeastSquaresFactor::solve: size mismatch");
  }
  RVector x = RVector::Zero(cols_);
  for (const Component& comp : components_) {
    if (comp.sigma.size() == 0) continue;
    RVector rhs(comp.rows.size());
    for (std::size_t i = 0; i < comp.rows.size(); ++i) rhs[i] = b[comp.rows[i]];
    const RVector coef = (comp.u.transpose() * rhs).cwiseQuotient(comp.sigma);
    const RVector xl = comp.v * coef;
    for (std::size_t j = 0; j < comp.cols.size(); ++j) x[comp.cols[j]] = xl[j];
  }
  return x;
}

RVector LeastSquaresFactor::solve_transpose(const RVector& g) const {
  if (g.size() != cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "LeastSquaresFactor::solve_transpose: size mismatch");
  }
  RVector z = RVector::Zero(rows_);
  for (const Component& comp : components_) {
    if (comp.sigma.size() == 0) continue;
    RVector rhs(comp.cols.size());
    for (std::size_t j = 0; j < comp.cols.size(); ++j) rhs[j] = g[comp.cols[j]];
    const RVector coef = (comp.v.transpose() * rhs).cwiseQuotient(comp.sigma);
    const RVector zl = comp.u * coef;
    for (std::size_t i = 0; i < comp.rows.size(); ++i) z[comp.rows[i]] = zl[i];
  }
  return z;
}

LstsqResult lstsq_min_norm(const SparseRealMatrix& a, const RVector& b, double rank_tol) {
  const LeastSquaresFactor factor(a, rank_tol);
  LstsqResult out;
  out.x = factor.solve(b);
  out.residual = (a.multiply(out.x) - b).norm();
  return out;
}

std::vector<RVector> nullspace(const SparseRealMatrix& a, double tol) {
  return LeastSquaresFactor(a, tol).null_basis().to_vectors();
}

}  // namespace qmsroot
