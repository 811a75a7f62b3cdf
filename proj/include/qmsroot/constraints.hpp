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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "qmsroot/linalg.hpp"
#include "qmsroot/qms_model.hpp"
#include "qmsroot/tensor.hpp"

namespace qmsroot {

/// Matrix units (i, j) in basis order; Q_a = E_{units[a]}.
using UnitOrder = std::vector<std::pair<int, int>>;

UnitOrder default_units(int n);

/// F(a, b) = f(Q_a, Q_b*) with f(A, B) = tr(D^{1-s} B* D^s L(A)).
struct TargetForm {
  double s = 0.0;
  CMatrix f;
};

TargetForm target_form(const LindbladSpec& spec, double s, const UnitOrder& units = {});

struct AssemblyOptions {
  int size_cap = 4;
  /// Permutation of the n^2 matrix units (unit id n*i + j). Empty: row-major.
  std::vector<int> basis_order;
  /// Relabeling of the n^4 tensor coordinates. Empty: identity.
  std::vector<int> psi_permutation;
  bool deduplicate = true;
};

enum class Family : std::uint8_t { Left, Right, Target };

struct FamilyStats {
  long raw_equations = 0;   // complex equations before pruning
  long real_rows = 0;       // realified rows with a nonzero coefficient
  long kept_rows = 0;       // after deduplication
};

/// Coefficient side of the system. It depends only on n and the chosen
/// basis/psi ordering, never on the generator, so one structure (and its
/// factorization) serves every right-hand side.
class ConstraintStructure {
 public:
  ConstraintStructure(int n, const AssemblyOptions& options);

  int n() const { return n_; }
  int m() const { return n_ * n_; }
  /// Side length of X, m^2 = n^4.
  int dim() const { return m() * m(); }
  const HermitianParam& layout() const { return layout_; }
  const SparseRealMatrix& matrix() const { return a_; }
  const UnitOrder& units() const { return units_; }
  const std::vector<int>& psi_permutation() const { return perm_; }
  const std::vector<Family>& row_family() const { return row_family_; }

  const FamilyStats& stats(Family f) const { return stats_[static_cast<int>(f)]; }
  long raw_complex_equations() const;
  long realified_rows_raw() const { return 2 * raw_complex_equations(); }

  /// Rows holding Re and Im of the (a, b) target equation.
  std::array<int, 2> target_rows(int a, int b) const { return target_rows_[a * m() + b]; }

  /// Coordinate of E_ij (x) E_kl in C^{n^4} after relabeling.
  int position(int i, int j, int k, int l) const { return perm_[psi0(n_, i, j, k, l)]; }
  CVector embed(const TensorElem& t) const;

  RVector rhs(const TargetForm& target) const;

  /// Cached factorization of the coefficient matrix.
  std::shared_ptr<const LeastSquaresFactor> factor(double rank_tol) const;

 private:
  int n_ = 0;
  HermitianParam layout_;
  UnitOrder units_;
  std::vector<int> perm_;
  SparseRealMatrix a_;
  std::vector<Family> row_family_;
  std::vector<std::array<int, 2>> target_rows_;
  std::array<FamilyStats, 3> stats_{};

  mutable std::mutex factor_mutex_;
  mutable std::map<double, std::shared_ptr<const LeastSquaresFactor>> factors_;
};

/// Shared, memoized structure for (n, options).
std::shared_ptr<const ConstraintStructure> assemble_structure(int n,
                                                              const AssemblyOptions& options = {});

struct ConstraintSystem {
  std::shared_ptr<const ConstraintStructure> structure;
  TargetForm target;
  RVector b;

  const SparseRealMatrix& matrix() const { return structure->matrix(); }
  /// max(1, ||A||_2, ||b||)
  double scale() const;
};

ConstraintSystem assemble(const LindbladSpec& spec, double s, const AssemblyOptions& options = {});
ConstraintSystem with_target(std::shared_ptr<const ConstraintStructure> structure,
                             TargetForm target);

/// G(a, b) = psi(Q_b* (x) 1)* X psi(Q_a (x) 1), evaluated from dense vectors.
CMatrix evaluate_target_rows(const ConstraintStructure& structure, const CMatrix& x);

/// Sorted "row col value" triplets followed by the nonzero right-hand side.
void dump_system(const ConstraintSystem& system, std::ostream& out);

}  // namespace qmsroot
