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

#include "qmsroot/constraints.hpp"

#include <algorithm>
#include <cstring>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>

namespace qmsroot {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

using SparseVec = std::vector<std::pair<int, cplx>>;

struct RowBuffer {
  std::vector<std::pair<int, double>> entries;

  void add(int col, double v) {
    if (v != 0.0) entries.emplace_back(col, v);
  }

  // Sort, merge, drop cancellations, then apply the 1/sqrt2 for pair columns.
  void finish(int diag_cols) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < entries.size(); ++r) {
      if (w > 0 && entries[w - 1].first == entries[r].first) {
        entries[w - 1].second += entries[r].second;
      } else {
        entries[w++] = entries[r];
      }
    }
    entries.resize(w);
    std::erase_if(entries, [](const auto& e) { return e.second == 0.0; });
    for (auto& e : entries) {
      if (e.first >= diag_cols) e.second *= kInvSqrt2;
    }
  }
};

struct Coef {
  int p;
  int q;
  cplx c;
};

// Realify sum_c c * X[p, q] over the Hermitian coordinates.
void realify(const std::vector<Coef>& coefs, const HermitianParam& layout, RowBuffer& re,
             RowBuffer& im) {
  re.entries.clear();
  im.entries.clear();
  for (const Coef& e : coefs) {
    const double cr = e.c.real();
    const double ci = e.c.imag();
    if (e.p == e.q) {
      re.add(layout.diag_index(e.p), cr);
      im.add(layout.diag_index(e.p), ci);
    } else if (e.p < e.q) {
      const int a = layout.re_index(e.p, e.q);
      const int b = layout.im_index(e.p, e.q);
      re.add(a, cr);
      re.add(b, -ci);
      im.add(a, ci);
      im.add(b, cr);
    } else {
      const int a = layout.re_index(e.q, e.p);
      const int b = layout.im_index(e.q, e.p);
      re.add(a, cr);
      re.add(b, ci);
      im.add(a, ci);
      im.add(b, -cr);
    }
  }
  re.finish(layout.dim());
  im.finish(layout.dim());
}

std::string row_key(const RowBuffer& row) {
  std::string key;
  key.resize(row.entries.size() * (sizeof(int) + sizeof(double)));
  char* out = key.data();
  const double lead = row.entries.front().second;
  for (const auto& [col, v] : row.entries) {
    const double scaled = v / lead;
    std::memcpy(out, &col, sizeof(int));
    out += sizeof(int);
    std::memcpy(out, &scaled, sizeof(double));
    out += sizeof(double);
  }
  return key;
}

void require_permutation(const std::vector<int>& p, int size, const char* what) {
  if (static_cast<int>(p.size()) != size) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": wrong length");
  }
  std::vector<bool> seen(size, false);
  for (int v : p) {
    if (v < 0 || v >= size || seen[v]) {
      throw Error(ErrorCode::InvalidInput, std::string(what) + ": not a permutation");
    }
    seen[v] = true;
  }
}

}  // namespace

UnitOrder default_units(int n) {
  UnitOrder u;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u.emplace_back(i, j);
  return u;
}

TargetForm target_form(const LindbladSpec& spec, double s, const UnitOrder& units_in) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "target_form: s must lie in [0, 1]");
  }
  const int n = spec.n();
  const UnitOrder units = units_in.empty() ? default_units(n) : units_in;
  const int m = static_cast<int>(units.size());
  const CMatrix left = spec.state().power(1.0 - s);
  const CMatrix right = spec.state().power(s);

  std::vector<CMatrix> generated;
  generated.reserve(m);
  for (const auto& [i, j] : units) generated.push_back(spec.apply(matrix_unit(n, i, j)));

  TargetForm t;
  t.s = s;
  t.f = CMatrix::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      // (Q_b*)* = Q_b
      const CMatrix qb = matrix_unit(n, units[b].first, units[b].second);
      t.f(a, b) = (left * qb * right * generated[a]).trace();
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

ConstraintStructure::ConstraintStructure(int n, const AssemblyOptions& options) : n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "assemble: n must be positive");
  if (n > options.size_cap) {
    throw Error(ErrorCode::SizeCapExceeded, "assemble: n = " + std::to_string(n) +
                                                " exceeds the size cap " +
                                                std::to_string(options.size_cap));
  }
  const int m = n * n;
  const int dim = m * m;
  layout_ = HermitianParam(dim);

  const UnitOrder all = default_units(n);
  if (options.basis_order.empty()) {
    units_ = all;
  } else {
    require_permutation(options.basis_order, m, "basis_order");
    for (int id : options.basis_order) units_.push_back(all[id]);
  }
  if (options.psi_permutation.empty()) {
    perm_.resize(dim);
    for (int p = 0; p < dim; ++p) perm_[p] = p;
  } else {
    require_permutation(options.psi_permutation, dim, "psi_permutation");
    perm_ = options.psi_permutation;
  }

  auto unit = [&](int a) {
    return matrix_unit(n, units_[a].first, units_[a].second);
  };
  auto unit_adj = [&](int a) {
    return matrix_unit(n, units_[a].second, units_[a].first);
  };
  auto positions = [&](const TensorElem& t) {
    SparseVec v;
    for (const TensorTerm& term : t.terms()) {
      v.emplace_back(position(term.i, term.j, term.k, term.l), term.c);
    }
    return v;
  };

  // pair[a2*m + a3] = Q_a2 (x) Q_a3, adj_pair[a4*m + a5] = Q_a4* (x) Q_a5*
  std::vector<TensorElem> pair(m * m), adj_pair(m * m);
  std::vector<SparseVec> pair_pos(m * m), adj_pair_pos(m * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const auto [i, j] = units_[a];
      const auto [k, l] = units_[b];
      pair[a * m + b] = TensorElem::unit(n, i, j, k, l);
      adj_pair[a * m + b] = TensorElem::unit(n, j, i, l, k);
      pair_pos[a * m + b] = positions(pair[a * m + b]);
      adj_pair_pos[a * m + b] = positions(adj_pair[a * m + b]);
    }
  }
  // act[0]: left, act[1]: right; [a1][t] for the kept and adjoint sides
  std::array<std::vector<SparseVec>, 2> acted, acted_adj;
  for (int fam = 0; fam < 2; ++fam) {
    acted[fam].resize(static_cast<std::size_t>(m) * m * m);
    acted_adj[fam].resize(static_cast<std::size_t>(m) * m * m);
    for (int a1 = 0; a1 < m; ++a1) {
      const CMatrix q = unit(a1);
      const CMatrix qa = unit_adj(a1);
      for (int t = 0; t < m * m; ++t) {
        const std::size_t idx = static_cast<std::size_t>(a1) * m * m + t;
        if (fam == 0) {
          acted[fam][idx] = positions(left_act(q, pair[t]));
          acted_adj[fam][idx] = positions(left_act(qa, adj_pair[t]));
        } else {
          acted[fam][idx] = positions(right_act(pair[t], q));
          acted_adj[fam][idx] = positions(right_act(adj_pair[t], qa));
        }
      }
    }
  }

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::unordered_set<std::string> seen;
  std::vector<Coef> coefs;
  RowBuffer re, im;

  auto emit = [&](RowBuffer& row, Family fam, bool dedupe, bool keep_empty) {
    FamilyStats& st = stats_[static_cast<int>(fam)];
    if (row.entries.empty()) {
      if (!keep_empty) return -1;
    } else {
      ++st.real_rows;
      if (dedupe && !seen.insert(row_key(row)).second) return -1;
    }
    ++st.kept_rows;
    rows.push_back(row.entries);
    row_family_.push_back(fam);
    return static_cast<int>(rows.size()) - 1;
  };

  // Equation u*Xv - u2*Xv2 = 0 for every (a1, ..., a5); coefficient of
  // X[p, q] in u*Xv is conj(u_p) v_q.
  for (int fam = 0; fam < 2; ++fam) {
    const Family family = fam == 0 ? Family::Left : Family::Right;
    FamilyStats& st = stats_[fam];
    for (int a1 = 0; a1 < m; ++a1) {
      for (int t23 = 0; t23 < m * m; ++t23) {
        const SparseVec& v = acted[fam][static_cast<std::size_t>(a1) * m * m + t23];
        const SparseVec& v2 = pair_pos[t23];
        for (int t45 = 0; t45 < m * m; ++t45) {
          ++st.raw_equations;
          const SparseVec& u = adj_pair_pos[t45];
          const SparseVec& u2 = acted_adj[fam][static_cast<std::size_t>(a1) * m * m + t45];
          if (v.empty() && u2.empty()) continue;
          coefs.clear();
          for (const auto& [p, cu] : u)
            for (const auto& [q, cv] : v) coefs.push_back({p, q, std::conj(cu) * cv});
          for (const auto& [p, cu] : u2)
            for (const auto& [q, cv] : v2) coefs.push_back({p, q, -std::conj(cu) * cv});
          realify(coefs, layout_, re, im);
          emit(re, family, options.deduplicate, false);
          emit(im, family, options.deduplicate, false);
        }
      }
    }
  }

  // psi(Q_b* (x) 1)* X psi(Q_a (x) 1) = F(a, b)
  target_rows_.resize(static_cast<std::size_t>(m) * m);
  const CMatrix identity = CMatrix::Identity(n, n);
  for (int a = 0; a < m; ++a) {
    const SparseVec v = positions(TensorElem::product(unit(a), identity));
    for (int b = 0; b < m; ++b) {
      ++stats_[2].raw_equations;
      const SparseVec u = positions(TensorElem::product(unit_adj(b), identity));
      coefs.clear();
      for (const auto& [p, cu] : u)
        for (const auto& [q, cv] : v) coefs.push_back({p, q, std::conj(cu) * cv});
      realify(coefs, layout_, re, im);
      const int r0 = emit(re, Family::Target, false, true);
      const int r1 = emit(im, Family::Target, false, true);
      target_rows_[a * m + b] = {r0, r1};
    }
  }

  a_ = SparseRealMatrix(static_cast<int>(rows.size()), layout_.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [c, v] : rows[r]) a_.add(static_cast<int>(r), c, v);
  }
  a_.finalize();
}

long ConstraintStructure::raw_complex_equations() const {
  return stats_[0].raw_equations + stats_[1].raw_equations + stats_[2].raw_equations;
}

CVector ConstraintStructure::embed(const TensorElem& t) const {
  if (t.n() != n_) throw Error(ErrorCode::DimensionMismatch, "embed: size mismatch");
  CVector v = CVector::Zero(dim());
  for (const TensorTerm& term : t.terms()) v[position(term.i, term.j, term.k, term.l)] += term.c;
  return v;
}

RVector ConstraintStructure::rhs(const TargetForm& target) const {
  if (target.f.rows() != m() || target.f.cols() != m()) {
    throw Error(ErrorCode::DimensionMismatch, "rhs: target form has the wrong size");
  }
  RVector b = RVector::Zero(a_.rows());
  for (int a = 0; a < m(); ++a) {
    for (int c = 0; c < m(); ++c) {
      const auto rows = target_rows(a, c);
      b[rows[0]] = target.f(a, c).real();
      b[rows[1]] = target.f(a, c).imag();
    }
  }
  return b;
}

std::shared_ptr<const LeastSquaresFactor> ConstraintStructure::factor(double rank_tol) const {
  std::lock_guard<std::mutex> lock(factor_mutex_);
  auto it = factors_.find(rank_tol);
  if (it != factors_.end()) return it->second;
  auto f = std::make_shared<const LeastSquaresFactor>(a_, rank_tol);
  factors_.emplace(rank_tol, f);
  return f;
}

std::shared_ptr<const ConstraintStructure> assemble_structure(int n,
                                                              const AssemblyOptions& options) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const ConstraintStructure>> cache;

  std::ostringstream key;
  key << n << '|' << options.size_cap << '|' << options.deduplicate << '|';
  for (int v : options.basis_order) key << v << ',';
  key << '|';
  for (int v : options.psi_permutation) key << v << ',';

  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const ConstraintStructure>(n, options);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key.str(), built).first->second;
}

double ConstraintSystem::scale() const {
  return std::max({1.0, structure->factor(1e-9)->norm(), b.norm()});
}

ConstraintSystem with_target(std::shared_ptr<const ConstraintStructure> structure,
                             TargetForm target) {
  ConstraintSystem sys;
  sys.b = structure->rhs(target);
  sys.structure = std::move(structure);
  sys.target = std::move(target);
  return sys;
}

ConstraintSystem assemble(const LindbladSpec& spec, double s, const AssemblyOptions& options) {
  if (spec.n() > options.size_cap) {
    throw Error(ErrorCode::SizeCapExceeded, "assemble: n = " + std::to_string(spec.n()) +
                                                " exceeds the size cap " +
                                                std::to_string(options.size_cap));
  }
  auto structure = assemble_structure(spec.n(), options);
  TargetForm target = target_form(spec, s, structure->units());
  return with_target(std::move(structure), std::move(target));
}

CMatrix evaluate_target_rows(const ConstraintStructure& structure, const CMatrix& x) {
  if (x.rows() != structure.dim() || x.cols() != structure.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "evaluate_target_rows: X has the wrong size");
  }
  const int n = structure.n();
  const int m = structure.m();
  const CMatrix identity = CMatrix::Identity(n, n);
  std::vector<CVector> left(m), right(m);
  for (int a = 0; a < m; ++a) {
    const auto [i, j] = structure.units()[a];
    right[a] = structure.embed(TensorElem::product(matrix_unit(n, i, j), identity));
    left[a] = structure.embed(TensorElem::product(matrix_unit(n, j, i), identity));
  }
  CMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    const CVector xv = x * right[a];
    for (int b = 0; b < m; ++b) g(a, b) = left[b].dot(xv);  // dot conjugates the left
  }
  return g;
}

void dump_system(const ConstraintSystem& system, std::ostream& out) {
  const SparseRealMatrix& a = system.matrix();
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << "# qmsroot constraint system n=" << system.structure->n() << " s="
      << std::setprecision(17) << system.target.s << "\n";
  out << "# rows " << a.rows() << " cols " << a.cols() << " nnz " << a.nnz() << "\n";
  for (int r = 0; r < a.rows(); ++r) {
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out << r << ' ' << cols[k] << ' ' << std::setprecision(17) << vals[k] << '\n';
    }
  }
  out << "# rhs\n";
  for (int r = 0; r < a.rows(); ++r) {
    if (system.b[r] != 0.0) out << r << ' ' << std::setprecision(17) << system.b[r] << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace qmsroot
