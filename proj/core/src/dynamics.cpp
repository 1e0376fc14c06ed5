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

#include "gridcoal/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>

#include "gridcoal/errors.hpp"

namespace gridcoal {

void DynamicsParams::validate() const {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw ValidationError("dynamics.sigma", "must lie in (0, 1]");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw ValidationError("dynamics.rho", "must lie in (0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon < rho)) {
    throw ValidationError("dynamics.epsilon", "must lie in [0, rho)");
  }
}

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
  TransitionMatrix t(n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

TransitionMatrix TransitionMatrix::from_rows(
    const std::vector<std::vector<double>>& rows) {
  TransitionMatrix t(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw DomainError("transition matrix must be square");
    }
    std::copy(rows[i].begin(), rows[i].end(), t.data_.begin() + static_cast<std::ptrdiff_t>(i * t.n_));
  }
  return t;
}

double TransitionMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (double v : row(i)) s += v;
  return s;
}

double TransitionMatrix::max_row_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    worst = std::max(worst, std::abs(row_sum(i) - 1.0));
  }
  return worst;
}

void TransitionMatrix::write_csv(std::ostream& out,
                                 const std::vector<std::string>& labels) const {
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  out << "state";
  for (std::size_t j = 0; j < n_; ++j) out << ',' << quoted(labels.at(j));
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < n_; ++i) {
    out << quoted(labels.at(i));
    for (std::size_t j = 0; j < n_; ++j) {
      auto res = std::to_chars(buf, buf + sizeof buf, (*this)(i, j));
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

double payoff_slack(double a, double b) noexcept {
  return 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool weakly_prefers(double after, double before) noexcept {
  return after >= before - payoff_slack(after, before);
}

bool strictly_prefers(double after, double before) noexcept {
  return after > before + payoff_slack(after, before);
}

namespace {

bool any_gain(Coalition actors, std::span<const double> before,
              std::span<const double> after) {
  for (int i : actors.members()) {
    const auto idx = static_cast<std::size_t>(i);
    if (strictly_prefers(after[idx], before[idx])) return true;
  }
  return false;
}

}  // namespace

double best_reply_prob(int actor, const Move& move,
                       std::span<const double> payoffs_before,
                       std::span<const double> payoffs_after,
                       const DynamicsParams& params) {
  if (!move.actors.contains(actor)) {
    throw DomainError("provider " + std::to_string(actor + 1) +
                      " does not take part in the move");
  }
  const auto i = static_cast<std::size_t>(actor);
  return weakly_prefers(payoffs_after[i], payoffs_before[i]) ? params.rho
                                                             : params.epsilon;
}

double transition_prob(const Move& move, const DynamicsParams& params,
                       std::span<const double> payoffs_before,
                       std::span<const double> payoffs_after) {
  if (move.from == move.to) return 0.0;
  const int n = move.from.num_players();
  const bool gain = any_gain(move.actors, payoffs_before, payoffs_after);
  double p = 1.0;
  for (int i : move.actors.members()) {
    const double tau =
        best_reply_prob(i, move, payoffs_before, payoffs_after, params);
    p *= params.sigma * (gain ? tau : params.epsilon);
  }
  return p * std::pow(1.0 - params.sigma, n - move.actors.size());
}

TransitionMatrix build_transition_matrix(const StateSpace& space,
                                         const PayoffTable& payoffs,
                                         const DynamicsParams& params) {
  params.validate();
  const std::size_t n = space.size();
  if (payoffs.size() != n) {
    throw DomainError("payoff table does not match the state space");
  }
  const int players = space.num_players();
  TransitionMatrix t(n);
  for (std::size_t k = 0; k < n; ++k) {
    double outflow = 0.0;
    for (const auto& e : space.edges(k)) {
      const bool gain = any_gain(e.actors, payoffs[k], payoffs[e.to]);
      double p = 1.0;
      for (int i : e.actors.members()) {
        const auto idx = static_cast<std::size_t>(i);
        p *= params.sigma *
             (gain && weakly_prefers(payoffs[e.to][idx], payoffs[k][idx])
                  ? params.rho
                  : params.epsilon);
      }
      p *= std::pow(1.0 - params.sigma, players - e.actors.size());
      t(k, e.to) += p;
      outflow += p;
    }
    double stay = 1.0 - outflow;
    if (stay < -1e-12) {
      throw NumericError("transition outflow from state " + std::to_string(k) +
                             " exceeds one",
                         -stay);
    }
    t(k, k) = std::max(stay, 0.0);
  }
  return t;
}

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix to_eigen(const TransitionMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  return Eigen::Map<const Matrix>(t.data().data(), n, n);
}

double residual_of(const Matrix& t, const Eigen::RowVectorXd& p) {
  return (p * t - p).cwiseAbs().maxCoeff();
}

}  // namespace

StationaryDistribution stationary_distribution(
    const TransitionMatrix& t, const StationaryOptions& options) {
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n == 0) throw DomainError("empty transition matrix");
  if (t.max_row_error() > 1e-9) {
    throw DomainError("transition matrix is not row-stochastic");
  }
  const Matrix tm = to_eigen(t);
  StationaryDistribution out;
  Eigen::RowVectorXd p;

  out.unichain = ergodic_sets(t).size() == 1;
  if (out.unichain) {
    // (T^T - I) p = 0 with the last equation replaced by sum(p) = 1.
    Matrix a = tm.transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    Eigen::VectorXd x = lu.solve(b);
    x += lu.solve(b - a * x);  // one refinement step
    p = x.transpose();
  } else {
    // Limit of the uniform start: p <- p T^(2^j) with repeated squaring.
    p = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Matrix m = tm;
    bool settled = false;
    for (int j = 0; j < options.max_squarings; ++j) {
      Eigen::RowVectorXd next = p * m;
      const double change = (next - p).cwiseAbs().maxCoeff();
      p = next;
      if (change <= options.tolerance) {
        settled = true;
        break;
      }
      m = (m * m).eval();
    }
    if (!settled) {
      throw NumericError("stationary distribution did not converge",
                         residual_of(tm, p));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) p(i) = std::max(p(i), 0.0);
  p /= p.sum();
  out.residual = residual_of(tm, p);
  out.p.assign(p.data(), p.data() + n);
  return out;
}

std::vector<std::size_t> absorbing_states(const TransitionMatrix& t) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t(k, k) >= 1.0 - 1e-12) out.push_back(k);
  }
  return out;
}

std::vector<std::vector<std::size_t>> ergodic_sets(const TransitionMatrix& t) {
  const std::size_t n = t.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && t(i, j) > 0.0) succ[i].push_back(j);
    }
  }
  // Tarjan's SCC, iterative.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;
  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < succ[f.v].size()) {
        const std::size_t w = succ[f.v][f.next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> c;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps.size();
          c.push_back(w);
        } while (w != v);
        comps.push_back(std::move(c));
      }
    }
  }
  std::vector<std::vector<std::size_t>> closed;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool leaves = false;
    for (std::size_t v : comps[c]) {
      for (std::size_t w : succ[v]) leaves = leaves || comp[w] != c;
    }
    if (!leaves) {
      std::sort(comps[c].begin(), comps[c].end());
      closed.push_back(std::move(comps[c]));
    }
  }
  std::sort(closed.begin(), closed.end());
  return closed;
}

std::vector<bool> merge_split_stable(const StateSpace& space,
                                     const CoalitionPayoff& payoff) {
  // All members of `actors` weakly prefer `after` blocks and one strictly.
  auto improves = [&](Coalition actors, const std::function<Coalition(int)>& before,
                      const std::function<Coalition(int)>& after) {
    bool strict = false;
    for (int i : actors.members()) {
      const double b = payoff(before(i), i);
      const double a = payoff(after(i), i);
      if (!weakly_prefers(a, b)) return false;
      strict = strict || strictly_prefers(a, b);
    }
    return strict;
  };

  std::vector<bool> stable(space.size(), true);
  for (std::size_t k = 0; k < space.size(); ++k) {
    const auto& blocks = space.state(k).blocks();
    for (std::size_t x = 0; x < blocks.size() && stable[k]; ++x) {
      for (std::size_t y = x + 1; y < blocks.size() && stable[k]; ++y) {
        const Coalition u = blocks[x] | blocks[y];
        const Coalition bx = blocks[x], by = blocks[y];
        if (improves(
                u, [&](int i) { return bx.contains(i) ? bx : by; },
                [&](int) { return u; })) {
          stable[k] = false;
        }
      }
    }
    for (std::size_t x = 0; x < blocks.size() && stable[k]; ++x) {
      const Coalition b = blocks[x];
      if (b.size() < 2) continue;
      // every bipartition {part, b \ part}, each listed once
      const std::uint32_t full = b.mask();
      for (std::uint32_t sub = (0u - full) & full; sub != 0 && stable[k];
           sub = (sub - full) & full) {
        if (sub == full || !(sub & (1u << b.lowest()))) continue;
        const Coalition part(sub), rest(full & ~sub);
        if (improves(
                b, [&](int) { return b; },
                [&](int i) { return part.contains(i) ? part : rest; })) {
          stable[k] = false;
        }
      }
    }
  }
  return stable;
}

}  // namespace gridcoal
