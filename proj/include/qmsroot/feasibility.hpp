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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmsroot/constraints.hpp"

namespace qmsroot {

struct FeasibilityTolerances {
  double rank = 1e-9;         // relative singular value cutoff
  double feasibility = 1e-8;  // consistency residual, relative to scale
  double psd = 1e-9;          // eigenvalue slack, relative to scale
};

struct SearchOptions {
  int max_iterations = 600;
  int restarts = 2;
  double relaxation = 1.6;  // over-relaxation factor, clamped to (0, 1.9]
  std::uint64_t seed = 0;
  int trajectory_stride = 25;
};

/// X0 + span(N) where X0 is the minimum-norm least-squares solution.
struct AffineSolution {
  std::shared_ptr<const ConstraintStructure> structure;
  std::shared_ptr<const LeastSquaresFactor> factor;
  RVector b;
  RVector x0;
  double residual = 0.0;
  double scale = 1.0;
  bool consistent = false;

  const BlockBasis& basis() const { return factor->null_basis(); }
  int nullspace_dim() const { return factor->nullity(); }
  CMatrix x0_matrix() const { return structure->layout().decode(x0); }
};

AffineSolution solve_affine(const ConstraintSystem& system, const FeasibilityTolerances& tol = {});

struct WitnessCheck {
  double value = 0.0;     // Re v* X0 v
  double imag = 0.0;      // Im v* X0 v, zero up to rounding
  double coupling = 0.0;  // max_k |v* N_k v|
};

WitnessCheck witness_check(const AffineSolution& sol, const CVector& v);

/// Vector v with v* X v constant and negative across the solution set. The
/// multiplier z satisfies A^T z = enc(v v*), so the constant equals b^T z.
struct InfeasibilityWitness {
  CVector v;
  double value = 0.0;
  double coupling = 0.0;
  std::vector<std::pair<int, double>> multiplier;  // sparse z
  double multiplier_residual = 0.0;                // ||A^T z - enc(v v*)||
  std::string origin;                              // which candidate family found it
};

std::optional<InfeasibilityWitness> make_witness(const AffineSolution& sol, const CVector& v,
                                                  const FeasibilityTolerances& tol,
                                                  std::string origin);

/// Cheap candidates only: negative eigenvectors of X0, single coordinates
/// and two-coordinate combinations outside the nullspace support.
std::optional<InfeasibilityWitness> witness_hunt(const AffineSolution& sol,
                                                 const FeasibilityTolerances& tol,
                                                 const std::vector<CMatrix>& iterates = {});

/// Normalized residual direction y with A^T y ~ 0 and b^T y > 0.
struct InconsistencyCertificate {
  std::vector<std::pair<int, double>> y;
  double bty = 0.0;
  double aty_norm = 0.0;
};

enum class VerdictKind { Feasible, NotConsistent, NotPsd, Indeterminate };

std::string to_string(VerdictKind k);
std::optional<VerdictKind> verdict_from_string(const std::string& s);

struct Diagnostics {
  double residual = 0.0;
  double scale = 1.0;
  int rank = 0;
  int nullspace_dim = 0;
  int components = 0;
  int largest_component = 0;
  double smallest_retained_sv = 0.0;
  double largest_dropped_sv = 0.0;
  double x0_min_eig = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  std::vector<double> min_eig_trajectory;
  double cone_gap = 0.0;  // last ||P_psd(Y) - Y||
};

struct Verdict {
  VerdictKind kind = VerdictKind::Indeterminate;
  std::optional<CMatrix> certificate;
  RVector spectrum;  // ascending, when a certificate exists
  double certificate_residual = 0.0;
  std::optional<InfeasibilityWitness> witness;
  std::optional<InconsistencyCertificate> inconsistency;
  Diagnostics diagnostics;
};

Verdict psd_search(const AffineSolution& sol, const FeasibilityTolerances& tol = {},
                   const SearchOptions& opts = {});

/// solve_affine followed by psd_search when consistent.
Verdict decide(const ConstraintSystem& system, const FeasibilityTolerances& tol = {},
               const SearchOptions& opts = {});

// Independent re-verification against the raw system; no factorization used.

struct CheckResult {
  bool ok = false;
  double residual = 0.0;
  double min_eig = 0.0;
  double value = 0.0;
  std::string message;
};

CheckResult verify_certificate(const ConstraintSystem& system, const CMatrix& x,
                               const FeasibilityTolerances& tol = {});
CheckResult verify_witness(const ConstraintSystem& system, const CVector& v,
                           const std::vector<std::pair<int, double>>& multiplier,
                           const FeasibilityTolerances& tol = {});
CheckResult verify_inconsistency(const ConstraintSystem& system,
                                 const std::vector<std::pair<int, double>>& y,
                                 const FeasibilityTolerances& tol = {});

}  // namespace qmsroot
