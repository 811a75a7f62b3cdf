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

#include "qmsroot/parametric_lab.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <thread>

#include "qmsroot/random.hpp"

namespace qmsroot {

void validate_y(const YMatrix& y, bool allow_negative, double tol) {
  if (!y.allFinite()) throw Error(ErrorCode::InvalidInput, "Y: non-finite entry");
  if ((y - y.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, y.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidInput, "Y: matrix must be symmetric");
  }
  if (!allow_negative && y.minCoeff() < 0.0) {
    throw Error(ErrorCode::InvalidInput, "Y: entries must be nonnegative");
  }
}

DensityState lambda_state(const LambdaPoint& p) {
  if (!(p.lambda2 > 0.0) || !(p.lambda3 > 0.0) || !std::isfinite(p.lambda2) ||
      !std::isfinite(p.lambda3)) {
    throw Error(ErrorCode::InvalidInput, "lambda: values must be positive and finite");
  }
  const double l2 = p.lambda2 * p.lambda2;
  const double l3 = p.lambda3 * p.lambda3;
  const double z = 1.0 + l2 + l3;
  return DensityState::from_diagonal({1.0 / z, l2 / z, l3 / z});
}

LindbladSpec build_ly(const LambdaPoint& p, const YMatrix& y, bool allow_negative) {
  validate_y(y, allow_negative);
  DensityState state = lambda_state(p);
  const double lam[3] = {1.0, p.lambda2, p.lambda3};
  std::vector<JumpInput> jumps;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (y(i, j) == 0.0) continue;
      const double omega = -std::log(lam[i] * lam[i] / (lam[j] * lam[j]));
      jumps.push_back({matrix_unit(3, i, j), omega, y(i, j)});
    }
  }
  return LindbladSpec(std::move(state), std::move(jumps));
}

std::array<double, 6> predicate_coefficients(const LambdaPoint& p) {
  const double a = p.lambda2;
  const double b = p.lambda3;
  const double a2 = a * a;
  const double b2 = b * b;
  return {
      (1.0 - b2 - a2) * (b2 - a2) / (b * a),  // Y23
      (b2 - 1.0 - a2) * (a2 - 1.0) / a,       // Y12
      (a2 - 1.0 - b2) * (1.0 - b2) / b,       // Y13
      b2 - a2,                                // Y11
      1.0 - b2,                               // Y22
      a2 - 1.0,                               // Y33
  };
}

std::array<double, 6> y_coordinates(const YMatrix& y) {
  return {y(1, 2), y(0, 1), y(0, 2), y(0, 0), y(1, 1), y(2, 2)};
}

YMatrix y_from_coordinates(const std::array<double, 6>& c) {
  YMatrix y;
  y << c[3], c[1], c[2], c[1], c[4], c[0], c[2], c[0], c[5];
  return y;
}

double predicate_lhs(const LambdaPoint& p, const YMatrix& y) {
  const auto c = predicate_coefficients(p);
  const auto v = y_coordinates(y);
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) acc += c[i] * v[i];
  return acc;
}

bool solvable_predicate(const LambdaPoint& p, const YMatrix& y, double tol) {
  const auto c = predicate_coefficients(p);
  const auto v = y_coordinates(y);
  double scale = 0.0;
  for (int i = 0; i < 6; ++i) scale += std::abs(c[i] * v[i]);
  return std::abs(predicate_lhs(p, y)) <= tol * scale;
}

YMatrix project_to_hyperplane(const LambdaPoint& p, const YMatrix& y) {
  const auto c = predicate_coefficients(p);
  auto v = y_coordinates(y);
  double cc = 0.0;
  double cv = 0.0;
  for (int i = 0; i < 6; ++i) {
    cc += c[i] * c[i];
    cv += c[i] * v[i];
  }
  if (cc == 0.0) return y;
  for (int i = 0; i < 6; ++i) v[i] -= cv / cc * c[i];
  return y_from_coordinates(v);
}

std::string to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Random:
      return "random";
    case SweepMode::Projected:
      return "projected";
    case SweepMode::Mixed:
      return "mixed";
  }
  return "mixed";
}

std::optional<SweepMode> sweep_mode_from_string(const std::string& s) {
  for (SweepMode m : {SweepMode::Random, SweepMode::Projected, SweepMode::Mixed}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

SweepRecord draw_sample(const SweepConfig& config, int sample_id) {
  SweepRecord r;
  r.sample_id = sample_id;
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(sample_id)));
  const double span = config.log_lambda_range;
  r.p.lambda2 = std::exp(rng.uniform(-span, span));
  r.p.lambda3 = std::exp(rng.uniform(-span, span));
  if (config.pinned) r.p = *config.pinned;
  YMatrix raw;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) raw(i, j) = rng.uniform();
  r.y = 0.5 * (raw + raw.transpose());
  switch (config.mode) {
    case SweepMode::Random:
      r.projected = false;
      break;
    case SweepMode::Projected:
      r.projected = true;
      break;
    case SweepMode::Mixed:
      r.projected = sample_id % 2 == 1;
      break;
  }
  if (r.projected) r.y = project_to_hyperplane(r.p, r.y);
  return r;
}

namespace {

void evaluate(const SweepConfig& config, SweepRecord& r) {
  try {
    r.predicate_lhs = predicate_lhs(r.p, r.y);
    r.predicate = solvable_predicate(r.p, r.y, config.predicate_tol);
    // projected samples may leave the nonnegative orthant; weights stay signed
    const LindbladSpec spec = build_ly(r.p, r.y, /*allow_negative=*/true);
    const ConstraintSystem sys = assemble(spec, config.s);
    const AffineSolution sol = solve_affine(sys, config.tolerances);
    r.consistent = sol.consistent;
    r.residual = sol.residual;
    r.agree = r.consistent == r.predicate;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.agree = false;
  }
}

}  // namespace

SweepSummary sweep(const SweepConfig& config,
                   const std::function<void(const SweepRecord&)>& emit) {
  if (config.samples < 0) throw Error(ErrorCode::InvalidInput, "sweep: samples must be >= 0");
  SweepSummary summary;
  const int count = config.samples;
  if (count == 0) return summary;
  summary.smallest_retained_sv =
      assemble_structure(3)->factor(config.tolerances.rank)->smallest_retained_sv();

  std::vector<SweepRecord> records(count);
  std::vector<char> done(count, 0);
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<int> next{0};

  auto worker = [&] {
    for (;;) {
      const int id = next.fetch_add(1);
      if (id >= count) return;
      SweepRecord r = draw_sample(config, id);
      evaluate(config, r);
      {
        std::lock_guard<std::mutex> lock(mutex);
        records[id] = std::move(r);
        done[id] = 1;
      }
      ready.notify_one();
    }
  };

  const int threads = std::max(1, std::min(config.threads, count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);

  for (int id = 0; id < count; ++id) {
    std::unique_lock<std::mutex> lock(mutex);
    ready.wait(lock, [&] { return done[id] != 0; });
    const SweepRecord& r = records[id];
    lock.unlock();
    ++summary.samples;
    if (r.agree) ++summary.agreed;
    if (!r.error.empty()) ++summary.failed;
    if (r.projected) {
      ++summary.projected;
      if (r.consistent) ++summary.projected_consistent;
    } else {
      ++summary.random_samples;
      if (r.agree) ++summary.random_agreed;
    }
    if (emit) emit(r);
  }
  for (auto& t : pool) t.join();
  return summary;
}

std::string sweep_csv_header() {
  return "sample_id,lambda2,lambda3,y11,y12,y13,y22,y23,y33,predicate_lhs,predicate,consistent,"
         "residual,agree";
}

std::string sweep_csv_row(const SweepRecord& r) {
  char buf[512];
  const double residual = r.error.empty() ? r.residual : std::nan("");
  std::snprintf(buf, sizeof buf,
                "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%d",
                r.sample_id, r.p.lambda2, r.p.lambda3, r.y(0, 0), r.y(0, 1), r.y(0, 2), r.y(1, 1),
                r.y(1, 2), r.y(2, 2), r.predicate_lhs, r.predicate ? 1 : 0, r.consistent ? 1 : 0,
                residual, r.agree ? 1 : 0);
  return buf;
}

std::array<double, 3> diag_jump_weights(double a, double b, double c) {
  const double ab = (a - b) * (a - b);
  const double ac = (a - c) * (a - c);
  const double bc = (b - c) * (b - c);
  return {0.5 * (ab + ac - bc), 0.5 * (ab + bc - ac), 0.5 * (ac + bc - ab)};
}

double diag_jump_identity(double a, double b, double c) {
  const DensityState state = DensityState::tracial(3);
  CMatrix v = CMatrix::Zero(3, 3);
  v(0, 0) = a;
  v(1, 1) = b;
  v(2, 2) = c;
  // diagonal jumps commute with any diagonal density, so omega = 0
  const LindbladSpec single(state, {{v, 0.0, 1.0}});
  const auto w = diag_jump_weights(a, b, c);
  std::vector<JumpInput> parts;
  for (int i = 0; i < 3; ++i) parts.push_back({matrix_unit(3, i, i), 0.0, w[i]});
  const LindbladSpec split(state, std::move(parts));

  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const CMatrix e = matrix_unit(3, i, j);
      worst = std::max(worst, (single.apply(e) - split.apply(e)).norm());
    }
  return worst;
}

}  // namespace qmsroot
