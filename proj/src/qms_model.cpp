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

#include "qmsroot/qms_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qmsroot/random.hpp"

namespace qmsroot {

namespace {

void require_square(const CMatrix& a, int n, const char* what) {
  if (a.rows() != n || a.cols() != n) {
    std::ostringstream os;
    os << what << ": expected " << n << "x" << n << " matrix, got " << a.rows() << "x"
       << a.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

cplx frobenius_inner(const CMatrix& x, const CMatrix& y) {
  // tr(X* Y)
  return (x.conjugate().cwiseProduct(y)).sum();
}

}  // namespace

CMatrix matrix_unit(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "matrix_unit: index out of range");
  }
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

DensityState::DensityState(CMatrix d, RVector evals, CMatrix basis)
    : d_(std::move(d)), evals_(std::move(evals)), basis_(std::move(basis)) {}

DensityState DensityState::from_matrix(const CMatrix& d, double tol) {
  if (d.rows() == 0 || d.rows() != d.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "density: matrix must be square and non-empty");
  }
  if (!all_finite(d)) {
    throw Error(ErrorCode::InvalidInput, "density: non-finite entry");
  }
  const double asym = (d - d.adjoint()).norm();
  if (asym > tol * std::max(1.0, d.norm())) {
    throw Error(ErrorCode::NotHermitian, "density: matrix is not Hermitian");
  }
  const cplx tr = d.trace();
  if (std::abs(tr - cplx(1.0, 0.0)) > tol) {
    std::ostringstream os;
    os.precision(17);
    os << "density: trace is " << tr.real() << ", expected 1";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  const CMatrix h = 0.5 * (d + d.adjoint());
  HermEig eig = herm_eig(h);
  if (!(eig.values(0) > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "density: state is not faithful (smallest eigenvalue " << eig.values(0) << ")";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  return DensityState(h, eig.values, eig.vectors);
}

DensityState DensityState::from_diagonal(const std::vector<double>& diag, double tol) {
  CMatrix d = CMatrix::Zero(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) d(i, i) = diag[i];
  return from_matrix(d, tol);
}

DensityState DensityState::tracial(int n) {
  if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "density: n must be positive");
  return from_matrix(CMatrix::Identity(n, n) / static_cast<double>(n));
}

CMatrix DensityState::power(double p) const {
  RVector lp(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i) lp[i] = std::pow(evals_[i], p);
  return basis_ * lp.asDiagonal() * basis_.adjoint();
}

CMatrix DensityState::modular_conjugate(const CMatrix& a, double p) const {
  require_square(a, n(), "modular_conjugate");
  return power(p) * a * power(-p);
}

cplx DensityState::s_inner(double s, const CMatrix& a, const CMatrix& b) const {
  require_square(a, n(), "s_inner");
  require_square(b, n(), "s_inner");
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "s_inner: s must lie in [0, 1]");
  }
  return (power(1.0 - s) * b.adjoint() * power(s) * a).trace();
}

double bohr_frequency(const DensityState& state, const CMatrix& v) {
  require_square(v, state.n(), "bohr_frequency");
  const double vv = v.squaredNorm();
  if (vv == 0.0) return 0.0;
  const cplx ratio = frobenius_inner(v, state.modular_conjugate(v, 1.0)) / vv;
  if (!(ratio.real() > 0.0) || std::abs(ratio.imag()) > 1e-12 * std::abs(ratio)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return -std::log(ratio.real());
}

// ---------------------------------------------------------------------------

LindbladSpec::LindbladSpec(DensityState state, std::vector<JumpInput> jumps)
    : state_(std::move(state)) {
  jumps_.reserve(jumps.size());
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    JumpInput& in = jumps[j];
    require_square(in.v, state_.n(), "jump operator");
    if (!all_finite(in.v) || !std::isfinite(in.weight)) {
      throw Error(ErrorCode::InvalidInput, "jump operator: non-finite entry");
    }
    Jump out;
    out.v = std::move(in.v);
    out.weight = in.weight;
    if (in.omega) {
      if (!std::isfinite(*in.omega)) {
        throw Error(ErrorCode::InvalidInput, "jump operator: omega must be finite");
      }
      out.omega = *in.omega;
    } else {
      out.omega = bohr_frequency(state_, out.v);
      out.omega_derived = true;
    }
    jumps_.push_back(std::move(out));
  }
}

CMatrix LindbladSpec::apply(const CMatrix& a) const {
  require_square(a, n(), "lindblad_apply");
  CMatrix out = CMatrix::Zero(n(), n());
  for (const Jump& j : jumps_) {
    const CMatrix& v = j.v;
    const CMatrix vs = v.adjoint();
    const double c = j.weight * std::exp(-0.5 * j.omega);
    out -= c * (vs * (a * v - v * a) + (vs * a - a * vs) * v);
  }
  return out;
}

LindbladSpec LindbladSpec::scaled(cplx c) const {
  std::vector<JumpInput> js;
  for (const Jump& j : jumps_) js.push_back({c * j.v, j.omega, j.weight});
  return LindbladSpec(state_, std::move(js));
}

// ---------------------------------------------------------------------------

ValidationReport validate_spec(const LindbladSpec& spec, double tol) {
  ValidationReport report;
  const auto& jumps = spec.jumps();
  const std::size_t count = jumps.size();

  std::vector<bool> matched(count, false);
  report.adjoint_closed = true;
  for (std::size_t j = 0; j < count; ++j) {
    if (matched[j]) continue;
    const CMatrix adj = jumps[j].v.adjoint();
    const double scale = std::max(1.0, jumps[j].v.norm());
    bool found = false;
    // self-adjoint jumps pair with themselves
    for (std::size_t k = j; k < count && !found; ++k) {
      if (matched[k]) continue;
      if ((jumps[k].v - adj).norm() <= tol * scale &&
          std::abs(jumps[k].weight - jumps[j].weight) <=
              tol * std::max(1.0, std::abs(jumps[j].weight))) {
        matched[j] = matched[k] = true;
        found = true;
      }
    }
    if (!found) {
      report.adjoint_closed = false;
      report.failures.push_back("jump " + std::to_string(j) + ": adjoint not in the jump set");
    }
  }

  const auto& state = spec.state();
  for (std::size_t j = 0; j < count; ++j) {
    const Jump& jump = jumps[j];
    JumpCheck check;
    check.omega = jump.omega;
    const double vn = jump.v.norm();
    if (!std::isfinite(jump.omega)) {
      check.eigen_residual = std::numeric_limits<double>::infinity();
    } else if (vn > 0.0) {
      const CMatrix conj = state.modular_conjugate(jump.v, 1.0);
      check.eigen_residual = (conj - std::exp(-jump.omega) * jump.v).norm() / vn;
    }
    check.ok = check.eigen_residual <= tol;
    if (!check.ok) {
      std::ostringstream os;
      os.precision(6);
      os << "jump " << j << ": not an eigenvector of the modular operator (relative residual "
         << check.eigen_residual << ")";
      report.failures.push_back(os.str());
    }
    report.jumps.push_back(check);
  }
  return report;
}

double s_symmetry_check(const LindbladSpec& spec, double s, int trials, std::uint64_t seed) {
  const int n = spec.n();
  double scale = 1.0;
  {
    double acc = 0.0;
    for (const Jump& j : spec.jumps()) {
      acc += std::abs(j.weight) * std::exp(-0.5 * j.omega) * j.v.squaredNorm();
    }
    scale = std::max(1.0, acc);
  }
  const CMatrix left = spec.state().power(1.0 - s);
  const CMatrix right = spec.state().power(s);
  auto inner = [&](const CMatrix& a, const CMatrix& b) {
    return (left * b.adjoint() * right * a).trace();
  };
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    CMatrix a = rng.complex_matrix(n, n);
    CMatrix b = rng.complex_matrix(n, n);
    a /= a.norm();
    b /= b.norm();
    const cplx lhs = inner(spec.apply(a), b);
    const cplx rhs = inner(a, spec.apply(b));
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

double gns_symmetry_check(const LindbladSpec& spec, int trials, std::uint64_t seed) {
  return s_symmetry_check(spec, 0.0, trials, seed);
}

}  // namespace qmsroot
