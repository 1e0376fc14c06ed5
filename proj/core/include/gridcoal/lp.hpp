// Copyright 2026 The gridcoal Authors
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

// Dense two-phase primal simplex.
//
// Pivoting follows Bland's rule throughout (lowest-index entering column with
// a positive reduced cost, lowest-index basic variable among ratio ties), so
// the solver terminates on degenerate problems and is deterministic.

#ifndef GRIDCOAL_LP_HPP
#define GRIDCOAL_LP_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gridcoal::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LinearConstraint {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

/// maximize objective . x  subject to
///   eq rows (=), ub rows (<=), lb rows (>=), lower <= x <= upper.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LinearConstraint> eq;
  std::vector<LinearConstraint> ub;
  std::vector<LinearConstraint> lb;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t n)
      : num_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, kInfinity) {}

  void add_eq(std::vector<double> coeffs, double rhs) {
    eq.push_back({std::move(coeffs), rhs});
  }
  void add_ub(std::vector<double> coeffs, double rhs) {
    ub.push_back({std::move(coeffs), rhs});
  }
  void add_lb(std::vector<double> coeffs, double rhs) {
    lb.push_back({std::move(coeffs), rhs});
  }

  /// Throws DomainError on inconsistent dimensions or bounds.
  void validate() const;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status s) noexcept;

struct Options {
  double tolerance = 1e-9;  ///< reduced-cost and pivot tolerance
  std::size_t max_pivots = 5'000'000;
};

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  /// Largest reduced cost over non-basic columns at the final basis; at
  /// optimality it is <= tolerance.
  double max_reduced_cost = 0.0;
  /// Largest violation of any constraint or bound by x.
  double primal_residual = 0.0;
  std::size_t pivots = 0;
};

/// Throws NumericError only if the pivot cap is hit; infeasibility and
/// unboundedness are reported through `status`.
Solution solve(const LinearProgram& lp, const Options& options = {});

double primal_residual(const LinearProgram& lp, std::span<const double> x);

}  // namespace gridcoal::lp

#endif  // GRIDCOAL_LP_HPP
