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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmsroot/feasibility.hpp"

namespace qmsroot {

using YMatrix = Eigen::Matrix3d;

/// Eigenvalue ratios of the M_3 density; lambda_1 is fixed to 1.
struct LambdaPoint {
  double lambda2 = 1.0;
  double lambda3 = 1.0;
};

/// Throws InvalidInput unless Y is finite and symmetric, and (unless
/// allow_negative) entrywise nonnegative.
void validate_y(const YMatrix& y, bool allow_negative = false, double tol = 1e-12);

/// D proportional to diag(1, lambda2^2, lambda3^2).
DensityState lambda_state(const LambdaPoint& p);

/// Jumps E_ij with weight Y_ij and omega_ij = -log(lambda_i^2 / lambda_j^2).
/// Zero weights are skipped.
LindbladSpec build_ly(const LambdaPoint& p, const YMatrix& y, bool allow_negative = false);

/// Coefficients of (Y23, Y12, Y13, Y11, Y22, Y33) in the solvability condition.
std::array<double, 6> predicate_coefficients(const LambdaPoint& p);
std::array<double, 6> y_coordinates(const YMatrix& y);
YMatrix y_from_coordinates(const std::array<double, 6>& c);

double predicate_lhs(const LambdaPoint& p, const YMatrix& y);
/// |lhs| <= tol * sum_i |c_i y_i|; scale-free in both lambda and Y.
bool solvable_predicate(const LambdaPoint& p, const YMatrix& y, double tol = 1e-10);

/// Orthogonal projection of Y onto {lhs = 0} in the six-coordinate space.
YMatrix project_to_hyperplane(const LambdaPoint& p, const YMatrix& y);

enum class SweepMode { Random, Projected, Mixed };

std::string to_string(SweepMode m);
std::optional<SweepMode> sweep_mode_from_string(const std::string& s);

struct SweepConfig {
  int samples = 200;
  std::uint64_t seed = 42;
  SweepMode mode = SweepMode::Mixed;  // mixed: even ids random, odd ids projected
  std::optional<LambdaPoint> pinned;
  double s = 0.0;
  double threshold = 0.99;
  double predicate_tol = 1e-10;
  double log_lambda_range = 2.0;  // lambda ~ exp(U[-r, r])
  FeasibilityTolerances tolerances;
  int threads = 1;
};

struct SweepRecord {
  int sample_id = 0;
  bool projected = false;
  LambdaPoint p;
  YMatrix y = YMatrix::Zero();
  double predicate_lhs = 0.0;
  bool predicate = false;
  bool consistent = false;
  double residual = 0.0;
  bool agree = false;
  std::string error;  // non-empty when the sample failed
};

struct SweepSummary {
  int samples = 0;
  int agreed = 0;
  int failed = 0;
  int projected = 0;
  int projected_consistent = 0;
  int random_samples = 0;
  int random_agreed = 0;
  double smallest_retained_sv = 0.0;
  double agreement() const { return samples ? static_cast<double>(agreed) / samples : 1.0; }
};

/// Sample generation only (deterministic in seed and id).
SweepRecord draw_sample(const SweepConfig& config, int sample_id);

/// Runs every sample; `emit` receives records in sample order as soon as
/// the prefix is complete.
SweepSummary sweep(const SweepConfig& config,
                   const std::function<void(const SweepRecord&)>& emit = {});

/// CSV header and one row, columns as documented in the README.
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRecord& r);

/// max over matrix units A of ||L_V(A) - sum_i w_i L_{E_ii}(A)||_F with
/// V = diag(a, b, c) and the signed weights w_i.
double diag_jump_identity(double a, double b, double c);
std::array<double, 3> diag_jump_weights(double a, double b, double c);

}  // namespace qmsroot
