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

#include <vector>

#include "qmsroot/linalg.hpp"

namespace qmsroot {

/// One term c * (E_ij (x) E_kl), indices 0-based.
struct TensorTerm {
  int i = 0;
  int j = 0;
  int k = 0;
  int l = 0;
  cplx c;
};

/// Sparse element of M_n (x) M_n in the matrix-unit basis. Terms are kept in
/// lexicographic (i, j, k, l) order with no zero coefficients.
class TensorElem {
 public:
  TensorElem() = default;
  explicit TensorElem(int n) : n_(n) {}

  static TensorElem unit(int n, int i, int j, int k, int l, cplx c = 1.0);
  /// A (x) B expanded in matrix units.
  static TensorElem product(const CMatrix& a, const CMatrix& b);

  int n() const { return n_; }
  const std::vector<TensorTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(int i, int j, int k, int l, cplx c);
  TensorElem& operator+=(const TensorElem& other);
  TensorElem& operator-=(const TensorElem& other);
  TensorElem& operator*=(cplx c);

  /// Merges duplicate index quadruples and drops exact zeros.
  void normalize();

  /// Largest coefficient modulus of this - other.
  double distance(const TensorElem& other) const;

 private:
  int n_ = 0;
  std::vector<TensorTerm> terms_;
};

TensorElem operator+(TensorElem a, const TensorElem& b);
TensorElem operator-(TensorElem a, const TensorElem& b);

/// A (B (x) C) = AB (x) C - A (x) BC.
TensorElem left_act(const CMatrix& a, const TensorElem& t);
/// (B (x) C) A = B (x) CA.
TensorElem right_act(const TensorElem& t, const CMatrix& a);

/// 1-based position of E_ij (x) E_kl, n^3 (i-1) + n^2 (k-1) + n (j-1) + l.
/// This is the row-major flattening of the Kronecker product E_ij kron E_kl.
int psi_index(int n, int i, int j, int k, int l);

/// 0-based variant taking 0-based indices, no range checks.
inline int psi0(int n, int i, int j, int k, int l) {
  return ((i * n + k) * n + j) * n + l;
}

/// Dense coordinate vector psi(t) in C^{n^4}.
CVector psi_vector(const TensorElem& t);

}  // namespace qmsroot
