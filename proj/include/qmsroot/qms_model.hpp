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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmsroot/linalg.hpp"

namespace qmsroot {

CMatrix matrix_unit(int n, int i, int j);

/// Faithful state on M_n given by a trace-one positive definite density
/// matrix. Fractional powers go through a cached eigendecomposition, so
/// non-diagonal densities are fine.
class DensityState {
 public:
  static DensityState from_matrix(const CMatrix& d, double tol = 1e-9);
  static DensityState from_diagonal(const std::vector<double>& diag, double tol = 1e-9);
  static DensityState tracial(int n);

  int n() const { return static_cast<int>(d_.rows()); }
  const CMatrix& matrix() const { return d_; }
  const RVector& eigenvalues() const { return evals_; }

  CMatrix power(double p) const;

  /// D^p A D^{-p}; p = 1 is sigma_{-i}.
  CMatrix modular_conjugate(const CMatrix& a, double p) const;

  /// tr(D^{1-s} B* D^s A).
  cplx s_inner(double s, const CMatrix& a, const CMatrix& b) const;

 private:
  DensityState(CMatrix d, RVector evals, CMatrix basis);

  CMatrix d_;
  RVector evals_;
  CMatrix basis_;
};

inline CMatrix modular_conjugate(const DensityState& state, const CMatrix& a, double p) {
  return state.modular_conjugate(a, p);
}

inline cplx s_inner(const DensityState& state, double s, const CMatrix& a, const CMatrix& b) {
  return state.s_inner(s, a, b);
}

/// Bohr frequency recovered as -log of the Rayleigh ratio
/// <V, D V D^-1>_F / <V, V>_F. NaN when the ratio is not a positive real.
double bohr_frequency(const DensityState& state, const CMatrix& v);

struct JumpInput {
  CMatrix v;
  std::optional<double> omega;
  double weight = 1.0;
};

struct Jump {
  CMatrix v;
  double omega = 0.0;
  double weight = 1.0;
  bool omega_derived = false;
};

/// Generator L(A) = -sum_j w_j e^{-omega_j/2} (V_j*[A,V_j] + [V_j*,A]V_j).
/// Weights default to one; signed weights cover the L_Y family.
class LindbladSpec {
 public:
  LindbladSpec(DensityState state, std::vector<JumpInput> jumps);

  const DensityState& state() const { return state_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  int n() const { return state_.n(); }

  CMatrix apply(const CMatrix& a) const;

  /// Same generator with each V_j multiplied by c.
  LindbladSpec scaled(cplx c) const;

 private:
  DensityState state_;
  std::vector<Jump> jumps_;
};

inline CMatrix lindblad_apply(const LindbladSpec& spec, const CMatrix& a) {
  return spec.apply(a);
}

struct JumpCheck {
  double omega = 0.0;
  double eigen_residual = 0.0;  // ||D V D^-1 - e^{-omega} V||_F / ||V||_F
  bool ok = false;
};

struct ValidationReport {
  bool adjoint_closed = false;
  std::vector<JumpCheck> jumps;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

ValidationReport validate_spec(const LindbladSpec& spec, double tol = 1e-9);

/// Max over random unit-norm A, B of |<L(A),B>_0 - <A,L(B)>_0| divided by
/// max(1, sum_j |w_j| e^{-omega_j/2} ||V_j||_F^2).
double gns_symmetry_check(const LindbladSpec& spec, int trials, std::uint64_t seed = 0);

/// Same probe for the s-interpolated inner product.
double s_symmetry_check(const LindbladSpec& spec, double s, int trials, std::uint64_t seed = 0);

}  // namespace qmsroot
