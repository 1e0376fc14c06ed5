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

// Markov dynamics of coalition structures under merge/split best replies.

#ifndef GRIDCOAL_DYNAMICS_HPP
#define GRIDCOAL_DYNAMICS_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gridcoal/partition.hpp"

namespace gridcoal {

struct DynamicsParams {
  double sigma = 0.5;     ///< probability that a provider acts in a slot
  double rho = 0.99;      ///< best-reply compliance
  double epsilon = 0.01;  ///< probability of an irrational move

  void validate() const;
};

/// Dense row-stochastic matrix over state ids.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static TransitionMatrix identity(std::size_t n);
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

  double row_sum(std::size_t i) const;
  /// max_i |row_sum(i) - 1|
  double max_row_error() const;

  /// CSV with state labels as the header row and first column.
  void write_csv(std::ostream& out, const std::vector<std::string>& labels) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// payoffs[state][player]: Shapley payoff of the player inside its own block
/// of that partition.
using PayoffTable = std::vector<std::vector<double>>;

/// Comparison slack for payoffs that are equal up to floating-point noise.
double payoff_slack(double a, double b) noexcept;
bool weakly_prefers(double after, double before) noexcept;
bool strictly_prefers(double after, double before) noexcept;

/// rho when the actor's payoff does not decrease, epsilon otherwise.
/// Throws DomainError when `actor` is not one of the move's actors.
double best_reply_prob(int actor, const Move& move,
                       std::span<const double> payoffs_before,
                       std::span<const double> payoffs_after,
                       const DynamicsParams& params);

/// prod over actors of sigma * tau_i, times (1 - sigma)^(N - |actors|).
/// A move on which no actor strictly gains is never a best reply (staying
/// is just as good), so every actor's tau is epsilon there.
double transition_prob(const Move& move, const DynamicsParams& params,
                       std::span<const double> payoffs_before,
                       std::span<const double> payoffs_after);

/// Off-diagonals over single merge/split moves, diagonal as the residual.
/// Throws NumericError when a row's outflow exceeds one.
TransitionMatrix build_transition_matrix(const StateSpace& space,
                                         const PayoffTable& payoffs,
                                         const DynamicsParams& params);

struct StationaryOptions {
  int max_squarings = 64;
  double tolerance = 1e-14;
};

struct StationaryDistribution {
  std::vector<double> p;
  double residual = 0.0;  ///< max |p^T T - p^T|
  bool unichain = true;   ///< false: limit of the uniform start was used
};

/// Direct solve when the chain has a single closed class; otherwise the limit
/// of the uniform initial distribution. Throws NumericError when that limit
/// does not settle (periodic chains).
StationaryDistribution stationary_distribution(
    const TransitionMatrix& t, const StationaryOptions& options = {});

/// States with a self-transition probability of one (within 1e-12).
std::vector<std::size_t> absorbing_states(const TransitionMatrix& t);

/// Closed communicating classes of the positive-transition graph, each sorted,
/// ordered by their smallest state id.
std::vector<std::vector<std::size_t>> ergodic_sets(const TransitionMatrix& t);

/// Payoff of `player` as a member of coalition `block`.
using CoalitionPayoff = std::function<double(Coalition block, int player)>;

/// Merge/split stability checked directly on coalition payoffs: no pair of
/// blocks can merge and no block can split in two with every actor weakly
/// and at least one strictly better off.
std::vector<bool> merge_split_stable(const StateSpace& space,
                                     const CoalitionPayoff& payoff);

}  // namespace gridcoal

#endif  // GRIDCOAL_DYNAMICS_HPP
