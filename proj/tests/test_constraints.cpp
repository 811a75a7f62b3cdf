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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "qmsroot/constraints.hpp"
#include "qmsroot/feasibility.hpp"

using namespace qmsroot;
using namespace qmsroot::testing;

namespace {

std::vector<int> shuffled(Rng& rng, int size) {
  std::vector<int> p(size);
  std::iota(p.begin(), p.end(), 0);
  for (int i = size - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform() * (i + 1));
    std::swap(p[i], p[std::min(j, i)]);
  }
  return p;
}

cplx form(const ConstraintStructure& st, const CMatrix& x, const TensorElem& xi,
          const TensorElem& eta) {
  return st.embed(xi).dot(x * st.embed(eta));
}

}  // namespace

TEST_CASE("equation counts for n = 2") {
  const auto st = assemble_structure(2);
  const int m = 4;
  CHECK(st->stats(Family::Left).raw_equations == m * m * m * m * m);
  CHECK(st->stats(Family::Right).raw_equations == m * m * m * m * m);
  CHECK(st->stats(Family::Target).raw_equations == m * m);
  CHECK(st->stats(Family::Target).kept_rows == 2 * m * m);
  long kept = 0;
  for (Family f : {Family::Left, Family::Right, Family::Target}) {
    CHECK(st->stats(f).kept_rows <= st->stats(f).real_rows + 2 * m * m);
    kept += st->stats(f).kept_rows;
  }
  CHECK(kept == st->matrix().rows());
  CHECK(st->matrix().cols() == 256);
  CHECK(st->row_family().size() == static_cast<std::size_t>(st->matrix().rows()));
}

TEST_CASE("coefficient matrix does not depend on the generator") {
  const auto a = assemble(two_level(), 0.0);
  Rng rng(3);
  const auto b = assemble(random_tracial(rng, 2), 0.5);
  CHECK(a.structure == b.structure);
  CHECK(a.b.size() == b.b.size());
  CHECK((a.b - b.b).norm() > 0.0);
  // only target rows carry a right-hand side
  for (int r = 0; r < a.matrix().rows(); ++r) {
    if (a.structure->row_family()[r] != Family::Target) CHECK(a.b[r] == 0.0);
  }
}

TEST_CASE("size cap and permutation validation") {
  AssemblyOptions small;
  small.size_cap = 2;
  try {
    assemble(three_level(), 0.0, small);
    FAIL("expected SizeCapExceeded");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SizeCapExceeded);
  }
  AssemblyOptions bad;
  bad.basis_order = {0, 1, 1, 3};
  CHECK_THROWS_AS(assemble_structure(2, bad), Error);
  bad.basis_order.clear();
  bad.psi_permutation = {0, 1, 2};
  CHECK_THROWS_AS(assemble_structure(2, bad), Error);
}

TEST_CASE("rank and nullity of the n = 2 system") {
  const auto st = assemble_structure(2);
  const auto f = st->factor(1e-9);
  CHECK(f->rank() + f->nullity() == 256);
  CHECK(f->nullity() == 0);
  CHECK(st->factor(1e-9) == f);  // cached
}

TEST_CASE("target rows reproduce the form at certificates") {
  for (double s : {0.0, 0.5, 1.0}) {
    const auto system = assemble(two_level(), s);
    const Verdict v = decide(system);
    REQUIRE(v.kind == VerdictKind::Feasible);
    const CMatrix g = evaluate_target_rows(*system.structure, *v.certificate);
    CHECK((g - system.target.f).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("solutions define a bimodule-compatible form") {
  // <xi, a eta> = <a* xi, eta> and <xi, eta a> = <xi a*, eta>
  const auto system = assemble(two_level(), 0.0);
  const auto& st = *system.structure;
  const Verdict v = decide(system);
  REQUIRE(v.certificate);
  const CMatrix& x = *v.certificate;
  Rng rng(12);
  for (int t = 0; t < 6; ++t) {
    const TensorElem xi = TensorElem::product(rng.complex_matrix(2, 2), rng.complex_matrix(2, 2));
    const TensorElem eta = TensorElem::product(rng.complex_matrix(2, 2), rng.complex_matrix(2, 2));
    const CMatrix a = rng.complex_matrix(2, 2);
    const cplx l1 = form(st, x, xi, left_act(a, eta));
    const cplx l2 = form(st, x, left_act(a.adjoint(), xi), eta);
    CHECK(std::abs(l1 - l2) <= 1e-9 * std::max(1.0, std::abs(l1)));
    const cplx r1 = form(st, x, xi, right_act(eta, a));
    const cplx r2 = form(st, x, right_act(xi, a.adjoint()), eta);
    CHECK(std::abs(r1 - r2) <= 1e-9 * std::max(1.0, std::abs(r1)));
  }
}

TEST_CASE("relabeling bases leaves the verdict and spectrum unchanged") {
  const auto spec = two_level();
  const Verdict base = decide(assemble(spec, 0.0));
  REQUIRE(base.kind == VerdictKind::Feasible);
  Rng rng(77);
  for (int trial = 0; trial < 2; ++trial) {
    AssemblyOptions opts;
    opts.basis_order = shuffled(rng, 4);
    opts.psi_permutation = shuffled(rng, 16);
    const auto system = assemble(spec, 0.0, opts);
    const Verdict v = decide(system);
    CHECK(v.kind == VerdictKind::Feasible);
    REQUIRE(v.spectrum.size() == base.spectrum.size());
    CHECK((v.spectrum - base.spectrum).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("deduplication only removes repeated rows") {
  AssemblyOptions raw;
  raw.deduplicate = false;
  const auto full = assemble_structure(2, raw);
  const auto dedup = assemble_structure(2);
  CHECK(full->matrix().rows() > dedup->matrix().rows());
  CHECK(full->factor(1e-9)->rank() == dedup->factor(1e-9)->rank());
}

TEST_CASE("system dump lists every triplet") {
  const auto system = assemble(two_level(), 0.0);
  std::ostringstream out;
  dump_system(system, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# qmsroot constraint system n=2 s=0", 0) == 0);
  long triplets = 0, rhs = 0;
  bool in_rhs = false;
  while (std::getline(in, line)) {
    if (line == "# rhs") {
      in_rhs = true;
    } else if (line[0] != '#') {
      ++(in_rhs ? rhs : triplets);
    }
  }
  CHECK(triplets == system.matrix().nnz());
  CHECK(rhs == (system.b.array() != 0.0).count());
}

TEST_CASE("n = 3 least squares reaches right-hand sides in the range") {
  const auto st = assemble_structure(3);
  const auto f = st->factor(1e-9);
  CHECK(f->rank() + f->nullity() == 81 * 81);
  Rng rng(4);
  const CMatrix g = rng.complex_matrix(81, 4);
  const CMatrix z = g * g.adjoint();
  const RVector b = st->matrix().multiply(st->layout().encode(z));
  const RVector x = f->solve(b);
  const RVector r = st->matrix().multiply(x) - b;
  CHECK(r.norm() <= 1e-10 * b.norm());
  CHECK(st->matrix().multiply_transpose(r).norm() <= 1e-10 * b.norm());
}
