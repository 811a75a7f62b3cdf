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

#include "qmsroot/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmsroot/random.hpp"

namespace qmsroot {

namespace {

std::vector<std::pair<int, double>> to_sparse(const RVector& x, double drop = 0.0) {
  std::vector<std::pair<int, double>> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0 && std::abs(x[i]) > drop) out.emplace_back(static_cast<int>(i), x[i]);
  }
  return out;
}

RVector from_sparse(const std::vector<std::pair<int, double>>& s, int size) {
  RVector x = RVector::Zero(size);
  for (const auto& [i, v] : s) {
    if (i < 0 || i >= size) throw Error(ErrorCode::IndexOutOfRange, "sparse vector index");
    x[i] += v;
  }
  return x;
}

// Power iteration on A^T A; only used by the verifiers so they do not lean on
// the factorization they are checking.
double spectral_norm_estimate(const SparseRealMatrix& a) {
  if (a.cols() == 0 || a.rows() == 0) return 0.0;
  RVector x = RVector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double sigma = 0.0;
  for (int it = 0; it < 200; ++it) {
    RVector y = a.multiply_transpose(a.multiply(x));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    const double next = std::sqrt(ny);
    x = y / ny;
    if (std::abs(next - sigma) <= 1e-12 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

double verify_scale(const ConstraintSystem& system) {
  return std::max({1.0, spectral_norm_estimate(system.matrix()), system.b.norm()});
}

struct EigState {
  RVector values;
  CMatrix vectors;
};

EigState eig_of(const HermitianParam& layout, const RVector& x) {
  CMatrix m = layout.decode(x);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NoConvergence, "eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

RVector clamp_psd(const HermitianParam& layout, const EigState& e, double floor) {
  RVector lam = e.values.cwiseMax(floor);
  CMatrix m = e.vectors * lam.asDiagonal() * e.vectors.adjoint();
  return layout.encode(m);
}

}  // namespace

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Feasible:
      return "FEASIBLE";
    case VerdictKind::NotConsistent:
      return "NOT_CONSISTENT";
    case VerdictKind::NotPsd:
      return "NOT_PSD";
    case VerdictKind::Indeterminate:
      return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

std::optional<VerdictKind> verdict_from_string(const std::string& s) {
  for (VerdictKind k : {VerdictKind::Feasible, VerdictKind::NotConsistent, VerdictKind::NotPsd,
                        VerdictKind::Indeterminate}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

AffineSolution solve_affine(const ConstraintSystem& system, const FeasibilityTolerances& tol) {
  AffineSolution sol;
  sol.structure = system.structure;
  sol.factor = system.structure->factor(tol.rank);
  sol.b = system.b;
  sol.x0 = sol.factor->solve(system.b);
  sol.residual = (system.matrix().multiply(sol.x0) - system.b).norm();
  sol.scale = std::max({1.0, sol.factor->norm(), system.b.norm()});
  sol.consistent = sol.residual <= tol.feasibility * sol.scale;
  return sol;
}

WitnessCheck witness_check(const AffineSolution& sol, const CVector& v) {
  const HermitianParam& layout = sol.structure->layout();
  if (v.size() != layout.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "witness_check: vector has the wrong length");
  }
  WitnessCheck out;
  const CMatrix x0 = layout.decode(sol.x0);
  const cplx q = v.dot(x0 * v);
  out.value = q.real();
  out.imag = q.imag();
  const RVector g = layout.encode_outer(v);
  const RVector c = sol.basis().coefficients(g);
  out.coupling = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

std::optional<InfeasibilityWitness> make_witness(const AffineSolution& sol, const CVector& v,
                                                  const FeasibilityTolerances& tol,
                                                  std::string origin) {
  const double vv = v.squaredNorm();
  if (vv == 0.0) return std::nullopt;
  const WitnessCheck wc = witness_check(sol, v);
  if (wc.coupling > tol.feasibility * vv) return std::nullopt;
  if (!(wc.value < -tol.psd * sol.scale * vv)) return std::nullopt;

  const RVector g = sol.structure->layout().encode_outer(v);
  const RVector z = sol.factor->solve_transpose(g);
  const double zres = (sol.structure->matrix().multiply_transpose(z) - g).norm();
  if (zres > tol.feasibility * std::max(1.0, g.norm())) return std::nullopt;

  InfeasibilityWitness w;
  w.v = v;
  w.value = wc.value;
  w.coupling = wc.coupling;
  w.multiplier = to_sparse(z);
  w.multiplier_residual = zres;
  w.origin = std::move(origin);
  return w;
}

std::optional<InfeasibilityWitness> witness_hunt(const AffineSolution& sol,
                                                 const FeasibilityTolerances& tol,
                                                 const std::vector<CMatrix>& iterates) {
  const HermitianParam& layout = sol.structure->layout();
  const int dim = layout.dim();
  const double thr = tol.psd * sol.scale;
  const CMatrix x0 = layout.decode(sol.x0);

  auto negative_eigvecs = [&](const CMatrix& m,
                              const char* origin) -> std::optional<InfeasibilityWitness> {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) return std::nullopt;
    for (int k = 0; k < dim && es.eigenvalues()[k] < -thr; ++k) {
      const CVector v = es.eigenvectors().col(k);
      // rounding dust off first: a sparse witness keeps the multiplier small
      const double cut = 1e-10 * v.cwiseAbs().maxCoeff();
      const CVector chopped =
          v.unaryExpr([cut](cplx c) { return std::abs(c) < cut ? cplx(0.0) : c; });
      if (auto w = make_witness(sol, chopped, tol, origin)) return w;
      if (auto w = make_witness(sol, v, tol, origin)) return w;
    }
    return std::nullopt;
  };

  if (auto w = negative_eigvecs(x0, "x0-eigenvector")) return w;

  // Coordinates the nullspace never moves: the form restricted to them is fixed.
  std::vector<bool> touched(layout.size(), false);
  for (const auto& block : sol.basis().blocks()) {
    for (std::size_t r = 0; r < block.coords.size(); ++r) {
      if (block.vectors.row(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff() > 0.0) {
        touched[block.coords[r]] = true;
      }
    }
  }

  for (int p = 0; p < dim; ++p) {
    if (touched[layout.diag_index(p)] || !(x0(p, p).real() < -thr)) continue;
    CVector v = CVector::Zero(dim);
    v[p] = 1.0;
    if (auto w = make_witness(sol, v, tol, "single-coordinate")) return w;
  }

  const cplx unit_i(0.0, 1.0);
  for (int p = 0; p < dim; ++p) {
    if (touched[layout.diag_index(p)]) continue;
    for (int q = p + 1; q < dim; ++q) {
      if (touched[layout.diag_index(q)] || touched[layout.re_index(p, q)] ||
          touched[layout.im_index(p, q)]) {
        continue;
      }
      Eigen::Matrix2cd block;
      block << x0(p, p), x0(p, q), x0(q, p), x0(q, q);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
      if (!(es.eigenvalues()[0] < -thr)) continue;
      // integer combinations first, then the exact minimizer
      const cplx phases[] = {1.0, -1.0, unit_i, -unit_i};
      for (const cplx ph : phases) {
        CVector v = CVector::Zero(dim);
        v[p] = 1.0;
        v[q] = ph;
        if (auto w = make_witness(sol, v, tol, "coordinate-pair")) return w;
      }
      CVector v = CVector::Zero(dim);
      v[p] = es.eigenvectors()(0, 0);
      v[q] = es.eigenvectors()(1, 0);
      if (auto w = make_witness(sol, v, tol, "coordinate-pair")) return w;
    }
  }

  for (const CMatrix& it : iterates) {
    if (auto w = negative_eigvecs(it, "iterate-eigenvector")) return w;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

CheckResult check_certificate_raw(const SparseRealMatrix& a, const RVector& b,
                                  const HermitianParam& layout, const CMatrix& x, double scale,
                                  const FeasibilityTolerances& tol) {
  CheckResult out;
  if (x.rows() != layout.dim() || x.cols() != layout.dim()) {
    out.message = "certificate has the wrong size";
    return out;
  }
  const double herm = (x - x.adjoint()).norm();
  if (herm > 1e-12 * std::max(1.0, x.norm())) {
    out.message = "certificate is not Hermitian";
    return out;
  }
  const CMatrix h = 0.5 * (x + x.adjoint());
  out.residual = (a.multiply(layout.encode(h)) - b).norm();
  out.min_eig = min_eigenvalue(h);
  const bool lin = out.residual <= tol.feasibility * scale;
  const bool psd = out.min_eig >= -tol.psd * scale;
  out.ok = lin && psd;
  std::ostringstream os;
  os.precision(6);
  os << "residual " << out.residual << (lin ? " ok" : " too large") << ", min eigenvalue "
     << out.min_eig << (psd ? " ok" : " too negative");
  out.message = os.str();
  return out;
}

}  // namespace

Verdict psd_search(const AffineSolution& sol, const FeasibilityTolerances& tol,
                   const SearchOptions& opts) {
  Verdict verdict;
  Diagnostics& d = verdict.diagnostics;
  d.residual = sol.residual;
  d.scale = sol.scale;
  d.rank = sol.factor->rank();
  d.nullspace_dim = sol.nullspace_dim();
  d.components = sol.factor->component_count();
  d.largest_component = sol.factor->largest_component_cols();
  d.smallest_retained_sv = sol.factor->smallest_retained_sv();
  d.largest_dropped_sv = sol.factor->largest_dropped_sv();

  const SparseRealMatrix& a = sol.structure->matrix();
  const HermitianParam& layout = sol.structure->layout();

  if (!sol.consistent) {
    verdict.kind = VerdictKind::NotConsistent;
    RVector r = sol.b - a.multiply(sol.x0);
    const double nr = r.norm();
    if (nr > 0.0) {
      r /= nr;
      InconsistencyCertificate cert;
      cert.y = to_sparse(r, 1e-13);
      const RVector y = from_sparse(cert.y, a.rows());
      cert.bty = sol.b.dot(y);
      cert.aty_norm = a.multiply_transpose(y).norm();
      verdict.inconsistency = std::move(cert);
    }
    return verdict;
  }

  const double thr = tol.psd * sol.scale;
  auto accept = [&](const RVector& x) {
    CMatrix m = layout.decode(x);
    CheckResult c = check_certificate_raw(a, sol.b, layout, m, sol.scale, tol);
    if (!c.ok) return false;
    verdict.kind = VerdictKind::Feasible;
    verdict.spectrum = herm_eig(m).values;
    verdict.certificate_residual = c.residual;
    verdict.certificate = std::move(m);
    return true;
  };

  const EigState e0 = eig_of(layout, sol.x0);
  d.x0_min_eig = e0.values[0];
  if (e0.values[0] >= -thr && accept(sol.x0)) return verdict;

  if (auto w = witness_hunt(sol, tol)) {
    verdict.kind = VerdictKind::NotPsd;
    verdict.witness = std::move(w);
    return verdict;
  }
  if (sol.nullspace_dim() == 0) {
    // a single non-PSD point; the eigenvector witness should have fired
    return verdict;
  }

  const BlockBasis& basis = sol.basis();
  const double gamma = std::clamp(opts.relaxation, 1e-3, 1.9);
  const double margin = std::max(10.0 * thr, 1e-7 * sol.scale);
  auto project_affine = [&](const RVector& y) -> RVector {
    return sol.x0 + basis.project(y - sol.x0);
  };

  Rng rng(opts.seed);
  std::vector<CMatrix> finals;
  for (int restart = 0; restart <= opts.restarts; ++restart) {
    d.restarts_used = restart;
    RVector y = sol.x0;
    if (restart > 0) {
      RVector noise(y.size());
      for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.normal();
      y = project_affine(y + basis.project(noise) * std::max(1.0, sol.x0.norm()) /
                                 std::sqrt(static_cast<double>(basis.dim())));
    }
    for (int it = 0; it < opts.max_iterations; ++it) {
      ++d.iterations;
      const EigState e = eig_of(layout, y);
      if (opts.trajectory_stride > 0 && it % opts.trajectory_stride == 0) {
        d.min_eig_trajectory.push_back(e.values[0]);
      }
      if (e.values[0] >= -thr && accept(y)) return verdict;
      const RVector z = clamp_psd(layout, e, margin);
      d.cone_gap = (z - y).norm();
      const RVector next = project_affine(z);
      y += gamma * (next - y);
    }
    finals.push_back(layout.decode(y));
  }

  if (auto w = witness_hunt(sol, tol, finals)) {
    verdict.kind = VerdictKind::NotPsd;
    verdict.witness = std::move(w);
  }
  return verdict;
}

Verdict decide(const ConstraintSystem& system, const FeasibilityTolerances& tol,
               const SearchOptions& opts) {
  return psd_search(solve_affine(system, tol), tol, opts);
}

// ---------------------------------------------------------------------------

CheckResult verify_certificate(const ConstraintSystem& system, const CMatrix& x,
                               const FeasibilityTolerances& tol) {
  return check_certificate_raw(system.matrix(), system.b, system.structure->layout(), x,
                               verify_scale(system), tol);
}

CheckResult verify_witness(const ConstraintSystem& system, const CVector& v,
                           const std::vector<std::pair<int, double>>& multiplier,
                           const FeasibilityTolerances& tol) {
  CheckResult out;
  const HermitianParam& layout = system.structure->layout();
  if (v.size() != layout.dim()) {
    out.message = "witness vector has the wrong length";
    return out;
  }
  const SparseRealMatrix& a = system.matrix();
  RVector z;
  try {
    z = from_sparse(multiplier, a.rows());
  } catch (const Error&) {
    out.message = "multiplier index out of range";
    return out;
  }
  const RVector g = layout.encode_outer(v);
  out.residual = (a.multiply_transpose(z) - g).norm();
  out.value = system.b.dot(z);
  const double vv = v.squaredNorm();
  const bool in_rowspace = out.residual <= tol.feasibility * std::max(1.0, g.norm());
  const bool negative = out.value < -tol.psd * verify_scale(system) * vv;
  out.ok = vv > 0.0 && in_rowspace && negative;
  std::ostringstream os;
  os.precision(12);
  os << "A^T z - vv* residual " << out.residual << (in_rowspace ? " ok" : " too large")
     << ", constant form value " << out.value << (negative ? " < 0" : " not negative");
  out.message = os.str();
  return out;
}

CheckResult verify_inconsistency(const ConstraintSystem& system,
                                 const std::vector<std::pair<int, double>>& y_sparse,
                                 const FeasibilityTolerances& tol) {
  CheckResult out;
  const SparseRealMatrix& a = system.matrix();
  RVector y;
  try {
    y = from_sparse(y_sparse, a.rows());
  } catch (const Error&) {
    out.message = "certificate index out of range";
    return out;
  }
  const double ny = y.norm();
  if (ny == 0.0) {
    out.message = "certificate is zero";
    return out;
  }
  y /= ny;
  // |y^T (A x - b)| <= ||A x - b||, so b^T y - ||A^T y|| ||x|| bounds every residual
  out.residual = a.multiply_transpose(y).norm();
  out.value = system.b.dot(y);
  const double scale = verify_scale(system);
  const bool orth = out.residual <= 1e-10 * scale;
  const bool separated = out.value > tol.feasibility * scale;
  out.ok = orth && separated;
  std::ostringstream os;
  os.precision(6);
  os << "||A^T y|| " << out.residual << (orth ? " ok" : " too large") << ", b^T y " << out.value
     << (separated ? " ok" : " too small");
  out.message = os.str();
  return out;
}

}  // namespace qmsroot
