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

#include "gridcoal/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gridcoal/errors.hpp"

namespace gridcoal::lp {

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  if (objective.size() != num_vars || lower.size() != num_vars ||
      upper.size() != num_vars) {
    throw DomainError("linear program: objective/bounds size mismatch");
  }
  for (const auto* rows : {&eq, &ub, &lb}) {
    for (const auto& r : *rows) {
      if (r.coeffs.size() != num_vars) {
        throw DomainError("linear program: constraint width mismatch");
      }
    }
  }
  for (std::size_t j = 0; j < num_vars; ++j) {
    if (lower[j] > upper[j] || lower[j] == kInfinity || upper[j] == -kInfinity) {
      throw DomainError("linear program: empty variable bound");
    }
  }
}

double primal_residual(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  auto dot = [&](const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) s += a[j] * x[j];
    return s;
  };
  for (const auto& r : lp.eq) worst = std::max(worst, std::abs(dot(r.coeffs) - r.rhs));
  for (const auto& r : lp.ub) worst = std::max(worst, dot(r.coeffs) - r.rhs);
  for (const auto& r : lp.lb) worst = std::max(worst, r.rhs - dot(r.coeffs));
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    worst = std::max(worst, lp.lower[j] - x[j]);
    worst = std::max(worst, x[j] - lp.upper[j]);
  }
  return worst;
}

namespace {

enum class RowKind { kLe, kGe, kEq };

// x_orig[var] = offset + sign * y[col]
struct ColumnMap {
  std::size_t var;
  double sign;
};

// Tableau arithmetic runs in extended precision: occupancy LPs of nearly
// absorbing chains have balance rows with coefficients down to ~1e-14.
using Real = long double;

class Simplex {
 public:
  static constexpr std::size_t kStallLimit = 50;
  static constexpr std::size_t kRefactorEvery = 100;
  static constexpr double kPivotTol = 1e-7;
  static constexpr int kMaxConfirms = 3;
  // Basic values this close to zero count as zero after a refactorization.
  static constexpr double kFeasibilityFloor = 1e-13;

  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  Simplex(const LinearProgram& lp, const Options& options)
      : lp_(lp), opt_(options) {
    build();
  }

  Solution run() {
    Solution sol;
    // Phase 1: maximize -(sum of artificials).
    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t j = first_artificial_; j < cols_; ++j) phase1[j] = -1.0;
    set_objective(phase1);
    iterate(/*bar_artificials=*/false, &sol.pivots);
    const double infeasibility = -objective_value();
    if (infeasibility > feasibility_tol_) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    drive_out_artificials(&sol.pivots);

    std::vector<double> phase2(cols_, 0.0);
    for (std::size_t c = 0; c < structural_; ++c) {
      phase2[c] = map_[c].sign * lp_.objective[map_[c].var];
    }
    set_objective(phase2);
    if (!iterate(/*bar_artificials=*/true, &sol.pivots)) {
      sol.status = Status::kUnbounded;
      return sol;
    }
    // The ratio test's slack can leave basic values a hair below zero once
    // the basis is solved exactly; dual pivots restore feasibility while
    // keeping the basis optimal.
    for (int round = 0; round < kMaxConfirms && restore_feasibility(&sol.pivots); ++round) {
      if (!iterate(/*bar_artificials=*/true, &sol.pivots)) {
        sol.status = Status::kUnbounded;
        return sol;
      }
    }
    sol.status = Status::kOptimal;
    sol.max_reduced_cost = max_reduced_cost();
    sol.x = recover_x();
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < lp_.num_vars; ++j) {
      sol.objective_value += lp_.objective[j] * sol.x[j];
    }
    sol.primal_residual = primal_residual(lp_, sol.x);
    return sol;
  }

 private:
  Real& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }
  Real at(std::size_t r, std::size_t c) const { return tab_[r * width_ + c]; }
  std::size_t obj_row() const { return rows_; }
  double objective_value() const { return -static_cast<double>(at(obj_row(), cols_)); }

  void build() {
    lp_.validate();
    // Structural columns and constant offsets.
    offset_.assign(lp_.num_vars, 0.0);
    std::vector<std::vector<std::size_t>> var_cols(lp_.num_vars);
    std::vector<std::pair<std::size_t, double>> upper_rows;  // (col, bound)
    for (std::size_t j = 0; j < lp_.num_vars; ++j) {
      const double lo = lp_.lower[j], hi = lp_.upper[j];
      if (lo > -kInfinity) {
        offset_[j] = lo;
        var_cols[j].push_back(map_.size());
        map_.push_back({j, 1.0});
        if (hi < kInfinity) upper_rows.emplace_back(map_.size() - 1, hi - lo);
      } else if (hi < kInfinity) {
        offset_[j] = hi;
        var_cols[j].push_back(map_.size());
        map_.push_back({j, -1.0});
      } else {
        var_cols[j].push_back(map_.size());
        map_.push_back({j, 1.0});
        var_cols[j].push_back(map_.size());
        map_.push_back({j, -1.0});
      }
    }
    structural_ = map_.size();

    struct Row {
      std::vector<double> a;
      double b;
      RowKind kind;
    };
    std::vector<Row> rows;
    auto add = [&](const LinearConstraint& c, RowKind kind) {
      Row r{std::vector<double>(structural_, 0.0), c.rhs, kind};
      for (std::size_t j = 0; j < lp_.num_vars; ++j) {
        if (c.coeffs[j] == 0.0) continue;
        r.b -= c.coeffs[j] * offset_[j];
        for (std::size_t col : var_cols[j]) r.a[col] = c.coeffs[j] * map_[col].sign;
      }
      rows.push_back(std::move(r));
    };
    for (const auto& c : lp_.ub) add(c, RowKind::kLe);
    for (const auto& c : lp_.lb) add(c, RowKind::kGe);
    for (const auto& c : lp_.eq) add(c, RowKind::kEq);
    for (auto [col, bound] : upper_rows) {
      Row r{std::vector<double>(structural_, 0.0), bound, RowKind::kLe};
      r.a[col] = 1.0;
      rows.push_back(std::move(r));
    }
    for (auto& r : rows) {
      if (r.b < 0.0) {
        for (double& v : r.a) v = -v;
        r.b = -r.b;
        if (r.kind == RowKind::kLe) {
          r.kind = RowKind::kGe;
        } else if (r.kind == RowKind::kGe) {
          r.kind = RowKind::kLe;
        }
      }
    }

    // Equilibrate: every row's largest coefficient becomes one.
    for (auto& r : rows) {
      double big = 0.0;
      for (double v : r.a) big = std::max(big, std::abs(v));
      if (big == 0.0) continue;
      for (double& v : r.a) v /= big;
      r.b /= big;
    }

    rows_ = rows.size();
    std::size_t slacks = 0, artificials = 0;
    for (const auto& r : rows) {
      if (r.kind != RowKind::kEq) ++slacks;
      if (r.kind != RowKind::kLe) ++artificials;
    }
    first_artificial_ = structural_ + slacks;
    cols_ = first_artificial_ + artificials;
    width_ = cols_ + 1;
    tab_.assign((rows_ + 1) * width_, 0.0);
    basis_.assign(rows_, 0);
    alive_.assign(rows_, true);

    double bmax = 0.0;
    std::size_t slack = structural_, art = first_artificial_;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Row& r = rows[i];
      std::copy(r.a.begin(), r.a.end(), tab_.begin() + static_cast<std::ptrdiff_t>(i * width_));
      at(i, cols_) = r.b;
      bmax = std::max(bmax, r.b);
      switch (r.kind) {
        case RowKind::kLe:
          at(i, slack) = 1.0;
          basis_[i] = slack++;
          break;
        case RowKind::kGe:
          at(i, slack++) = -1.0;
          at(i, art) = 1.0;
          basis_[i] = art++;
          break;
        case RowKind::kEq:
          at(i, art) = 1.0;
          basis_[i] = art++;
          break;
      }
    }
    // Keep the standard-form matrix for refactorization and the final
    // basis re-solve.
    original_ = tab_;
    column_nz_.assign(width_, {});
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < width_; ++j) {
        if (original_[i * width_ + j] != 0.0) column_nz_[j].emplace_back(i, original_[i * width_ + j]);
      }
    }
    feasibility_tol_ = opt_.tolerance * std::max(1.0, bmax);
  }

  void set_objective(const std::vector<double>& c) {
    cost_ = c;
    double big = 1.0;
    for (double v : c) big = std::max(big, std::abs(v));
    cost_tol_ = opt_.tolerance * big;
    const std::size_t z = obj_row();
    for (std::size_t j = 0; j <= cols_; ++j) at(z, j) = j < cols_ ? c[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!alive_[i]) continue;
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(z, j) -= cb * at(i, j);
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    const Real p = at(r, s);
    Real* row_r = &tab_[r * width_];
    for (std::size_t j = 0; j <= cols_; ++j) row_r[j] /= p;
    row_r[s] = 1.0;
    // The pivot row is usually sparse; only its non-zeros change other rows.
    nonzero_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (row_r[j] != 0.0) nonzero_.push_back(j);
    }
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      Real* row_i = &tab_[i * width_];
      const Real f = row_i[s];
      if (f == 0.0) continue;
      for (std::size_t j : nonzero_) row_i[j] -= f * row_r[j];
      row_i[s] = 0.0;
      if (i < rows_ && row_i[cols_] < 0.0 && row_i[cols_] > -opt_.tolerance) {
        row_i[cols_] = 0.0;
      }
    }
    basis_[r] = s;
    fresh_ = false;
  }

  // Dantzig's largest-coefficient rule, falling back to Bland's rule while
  // the objective stalls so that degenerate vertices cannot cycle. Returns
  // false when the problem is unbounded in the entering direction.
  bool iterate(bool bar_artificials, std::size_t* pivots) {
    const std::size_t limit = bar_artificials ? first_artificial_ : cols_;
    const std::size_t z = obj_row();
    std::size_t stalled = 0;
    int confirms = 0;
    for (;;) {
      const bool bland = stalled >= kStallLimit;
      std::size_t s = limit;
      double best_gain = cost_tol_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (at(z, j) > best_gain) {
          s = j;
          if (bland) break;
          best_gain = at(z, j);
        }
      }
      if (s == limit) {
        if (!fresh_ && confirms++ < kMaxConfirms) {
          refactor();  // confirm optimality on a clean tableau
          continue;
        }
        return true;
      }
      // Harris two-pass ratio test: the loosest ratio bound with a small
      // feasibility slack, then the largest pivot element within it.
      Real bound = kInfinity;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!alive_[i] || at(i, s) <= kPivotTol) continue;
        bound = std::min(bound, (std::max(at(i, cols_), Real{0}) + opt_.tolerance) / at(i, s));
      }
      std::size_t r = rows_;
      Real best = kInfinity;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!alive_[i]) continue;
        const Real a = at(i, s);
        if (a <= kPivotTol) continue;
        const Real ratio = std::max(at(i, cols_), Real{0}) / a;
        if (ratio > bound) continue;
        const bool better =
            r == rows_ ||
            (bland ? (ratio < best - 1e-12 ||
                      (ratio <= best + 1e-12 && basis_[i] < basis_[r]))
                   : a > at(r, s));
        if (better) {
          r = i;
          best = ratio;
        }
      }
      if (r == rows_) return false;
      stalled = best * at(z, s) > 1e-12 ? 0 : stalled + 1;
      pivot(r, s);
      if (*pivots % kRefactorEvery == kRefactorEvery - 1) refactor();
      if (++*pivots > opt_.max_pivots) {
        throw NumericError("simplex pivot limit reached", objective_value());
      }
    }
  }

  // Rebuilds the tableau from the original rows and the current basis, which
  // discards the rounding accumulated by successive pivots.
  void refactor() {
    std::vector<std::size_t> live;
    std::vector<std::ptrdiff_t> slot(rows_, -1);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (alive_[i]) {
        slot[i] = static_cast<std::ptrdiff_t>(live.size());
        live.push_back(i);
      }
    }
    const auto m = static_cast<Eigen::Index>(live.size());
    if (m == 0) return;
    Matrix b_mat(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const Real* src = &original_[live[static_cast<std::size_t>(r)] * width_];
      for (Eigen::Index c = 0; c < m; ++c) {
        b_mat(r, c) = src[basis_[live[static_cast<std::size_t>(c)]]];
      }
    }
    // B^-1 once, then B^-1 A over the non-zeros of the original columns.
    const Matrix inv = Eigen::PartialPivLU<Matrix>(b_mat).inverse();
    for (std::size_t row : live) {
      std::fill_n(tab_.begin() + static_cast<std::ptrdiff_t>(row * width_), width_, Real{0});
    }
    for (std::size_t j = 0; j < width_; ++j) {
      for (const auto& [row, value] : column_nz_[j]) {
        const std::ptrdiff_t k = slot[row];
        if (k < 0) continue;
        for (Eigen::Index r = 0; r < m; ++r) {
          at(live[static_cast<std::size_t>(r)], j) += inv(r, k) * value;
        }
      }
    }
    for (std::size_t row : live) {
      for (std::size_t c : live) at(row, basis_[c]) = 0.0;
      at(row, basis_[row]) = 1.0;
      if (std::abs(at(row, cols_)) < kFeasibilityFloor) at(row, cols_) = 0.0;
    }
    set_objective(cost_);
    fresh_ = true;
  }

  // Dual simplex on an exactly refactorized tableau until no basic value is
  // negative. Returns whether any pivot was made.
  bool restore_feasibility(std::size_t* pivots) {
    const std::size_t z = obj_row();
    bool moved = false;
    for (std::size_t step = 0; step < rows_; ++step) {
      refactor();
      std::size_t r = rows_;
      double worst = -kFeasibilityFloor;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (alive_[i] && at(i, cols_) < worst) {
          r = i;
          worst = at(i, cols_);
        }
      }
      if (r == rows_) break;
      // Dual ratio test: keep every reduced cost non-positive.
      std::size_t s = first_artificial_;
      Real best = kInfinity;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        const Real a = at(r, j);
        if (a >= -kPivotTol) continue;
        const Real ratio = std::max(-at(z, j), Real{0}) / -a;
        if (ratio < best) {
          s = j;
          best = ratio;
        }
      }
      if (s == first_artificial_) break;  // nothing to trade; leave as is
      pivot(r, s);
      ++*pivots;
      moved = true;
    }
    return moved;
  }

  void drive_out_artificials(std::size_t* pivots) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!alive_[i] || basis_[i] < first_artificial_) continue;
      std::size_t s = first_artificial_;
      double big = kPivotTol;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(at(i, j)) > big) {
          s = j;
          big = std::abs(at(i, j));
        }
      }
      if (s == first_artificial_) {
        alive_[i] = false;  // redundant equation
        continue;
      }
      pivot(i, s);
      ++*pivots;
    }
  }

  double max_reduced_cost() const {
    double worst = -kInfinity;
    std::vector<bool> basic(cols_, false);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (alive_[i]) basic[basis_[i]] = true;
    }
    for (std::size_t j = 0; j < first_artificial_; ++j) {
      if (!basic[j]) worst = std::max(worst, static_cast<double>(at(obj_row(), j)));
    }
    return worst == -kInfinity ? 0.0 : worst;
  }

  std::vector<double> recover_x() const {
    // Re-solve B y_B = b from the untouched standard form so that the answer
    // does not carry the tableau's accumulated rounding.
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (alive_[i]) live.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(live.size());
    Matrix b_mat(m, m);
    Vector rhs(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const std::size_t row = live[static_cast<std::size_t>(r)];
      rhs(r) = original_[row * width_ + cols_];
      for (Eigen::Index c = 0; c < m; ++c) {
        b_mat(r, c) = original_[row * width_ + basis_[live[static_cast<std::size_t>(c)]]];
      }
    }
    std::vector<double> y(cols_, 0.0);
    if (m > 0) {
      Eigen::PartialPivLU<Matrix> lu(b_mat);
      Vector yb = lu.solve(rhs);
      yb += lu.solve(rhs - b_mat * yb);
      for (Eigen::Index c = 0; c < m; ++c) {
        const std::size_t col = basis_[live[static_cast<std::size_t>(c)]];
        const double v = static_cast<double>(yb(c));
        y[col] = std::abs(v) < 1e-13 ? 0.0 : std::max(v, 0.0);
      }
    }
    std::vector<double> x(offset_);
    for (std::size_t c = 0; c < structural_; ++c) {
      x[map_[c].var] += map_[c].sign * y[c];
    }
    return x;
  }

  const LinearProgram& lp_;
  Options opt_;
  std::vector<double> offset_;
  std::vector<ColumnMap> map_;
  std::size_t structural_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t width_ = 0;
  std::vector<Real> tab_;
  std::vector<std::size_t> nonzero_;
  std::vector<Real> original_;
  std::vector<std::vector<std::pair<std::size_t, Real>>> column_nz_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
  std::vector<bool> alive_;
  double feasibility_tol_ = 0.0;
  double cost_tol_ = 0.0;
  bool fresh_ = false;
};

}  // namespace

Solution solve(const LinearProgram& lp, const Options& options) {
  Simplex simplex(lp, options);
  return simplex.run();
}

}  // namespace gridcoal::lp
