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

#include "qmsroot/tensor.hpp"

#include <algorithm>
#include <tuple>

namespace qmsroot {

namespace {

bool index_less(const TensorTerm& a, const TensorTerm& b) {
  return std::tie(a.i, a.j, a.k, a.l) < std::tie(b.i, b.j, b.k, b.l);
}

bool index_equal(const TensorTerm& a, const TensorTerm& b) {
  return a.i == b.i && a.j == b.j && a.k == b.k && a.l == b.l;
}

void require_size(const CMatrix& a, int n, const char* what) {
  if (a.rows() != n || a.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": size mismatch");
  }
}

}  // namespace

TensorElem TensorElem::unit(int n, int i, int j, int k, int l, cplx c) {
  TensorElem t(n);
  t.add_term(i, j, k, l, c);
  t.normalize();
  return t;
}

TensorElem TensorElem::product(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "TensorElem::product: size mismatch");
  }
  const int n = static_cast<int>(a.rows());
  TensorElem t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (a(i, j) == cplx(0.0)) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (b(k, l) == cplx(0.0)) continue;
          t.terms_.push_back({i, j, k, l, a(i, j) * b(k, l)});
        }
    }
  t.normalize();
  return t;
}

void TensorElem::add_term(int i, int j, int k, int l, cplx c) {
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= n_ || j >= n_ || k >= n_ || l >= n_) {
    throw Error(ErrorCode::IndexOutOfRange, "TensorElem: index out of range");
  }
  terms_.push_back({i, j, k, l, c});
}

void TensorElem::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(), index_less);
  std::vector<TensorTerm> merged;
  merged.reserve(terms_.size());
  for (const TensorTerm& t : terms_) {
    if (!merged.empty() && index_equal(merged.back(), t)) {
      merged.back().c += t.c;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const TensorTerm& t) { return t.c == cplx(0.0); });
  terms_ = std::move(merged);
}

TensorElem& TensorElem::operator+=(const TensorElem& other) {
  if (n_ == 0) n_ = other.n_;
  if (other.n_ != n_ && !other.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "TensorElem: size mismatch");
  }
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

TensorElem& TensorElem::operator-=(const TensorElem& other) {
  TensorElem neg = other;
  neg *= -1.0;
  return *this += neg;
}

TensorElem& TensorElem::operator*=(cplx c) {
  for (TensorTerm& t : terms_) t.c *= c;
  normalize();
  return *this;
}

double TensorElem::distance(const TensorElem& other) const {
  TensorElem d = *this;
  d -= other;
  double worst = 0.0;
  for (const TensorTerm& t : d.terms_) worst = std::max(worst, std::abs(t.c));
  return worst;
}

TensorElem operator+(TensorElem a, const TensorElem& b) { return a += b; }
TensorElem operator-(TensorElem a, const TensorElem& b) { return a -= b; }

TensorElem left_act(const CMatrix& a, const TensorElem& t) {
  const int n = t.n();
  require_size(a, n, "left_act");
  TensorElem out(n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      const cplx coef = a(r, s);
      if (coef == cplx(0.0)) continue;
      for (const TensorTerm& term : t.terms()) {
        // E_rs E_ij (x) E_kl = delta_si E_rj (x) E_kl
        if (s == term.i) out.add_term(r, term.j, term.k, term.l, coef * term.c);
        // E_rs (x) E_ij E_kl = delta_jk E_rs (x) E_il
        if (term.j == term.k) out.add_term(r, s, term.i, term.l, -coef * term.c);
      }
    }
  out.normalize();
  return out;
}

TensorElem right_act(const TensorElem& t, const CMatrix& a) {
  const int n = t.n();
  require_size(a, n, "right_act");
  TensorElem out(n);
  for (const TensorTerm& term : t.terms()) {
    // E_kl E_rs = delta_lr E_ks
    for (int s = 0; s < n; ++s) {
      const cplx coef = a(term.l, s);
      if (coef != cplx(0.0)) out.add_term(term.i, term.j, term.k, s, coef * term.c);
    }
  }
  out.normalize();
  return out;
}

int psi_index(int n, int i, int j, int k, int l) {
  if (n <= 0 || i < 1 || j < 1 || k < 1 || l < 1 || i > n || j > n || k > n || l > n) {
    throw Error(ErrorCode::IndexOutOfRange, "psi_index: index out of range");
  }
  return psi0(n, i - 1, j - 1, k - 1, l - 1) + 1;
}

CVector psi_vector(const TensorElem& t) {
  const int n = t.n();
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n) * n * n * n);
  for (const TensorTerm& term : t.terms()) v[psi0(n, term.i, term.j, term.k, term.l)] += term.c;
  return v;
}

}  // namespace qmsroot
