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

// The grid side of the game: utility, the occupancy-measure LP for the
// constrained pricing MDP, policy extraction, long-run averages, and the
// centralized and non-cooperative baselines.

#ifndef GRIDCOAL_POLICY_HPP
#define GRIDCOAL_POLICY_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "gridcoal/allocation.hpp"
#include "gridcoal/dynamics.hpp"
#include "gridcoal/lp.hpp"
#include "gridcoal/model.hpp"
#include "gridcoal/partition.hpp"
#include "gridcoal/shapley.hpp"

namespace gridcoal {

/// Finite set of billing-reference vectors (kW per provider bus).
struct ActionGrid {
  std::vector<std::vector<double>> actions;

  std::size_t size() const noexcept { return actions.size(); }

  /// One action per factor: factor * reference on every bus.
  static ActionGrid scaled(std::span<const double> reference,
                           std::span<const double> factors);
  /// Every per-bus combination of factors. Throws DomainError beyond
  /// `max_actions`.
  static ActionGrid cartesian(std::span<const double> reference,
                              std::span<const double> factors,
                              std::size_t max_actions = 64);
};

/// Everything needed to play one slot. All per-provider vectors are indexed by
/// provider id; every provider sits on its own bus.
struct SlotInputs {
  std::size_t slot = 0;
  std::vector<DataCenterSpec> specs;
  std::vector<std::int64_t> workloads;
  std::vector<double> beta;
  std::vector<double> base_price;
  std::vector<double> supply;
  double price_lo = 0.08;
  double price_hi = 0.25;
  double alpha1 = 0.3;
  double alpha2 = 0.7;
  double k_norm = 0.25;
  MigrationCostMatrix migration;
  DynamicsParams dynamics;
  AllocationOptions allocation;

  std::size_t num_providers() const noexcept { return specs.size(); }
  /// Per-provider draw when everybody serves its own workload.
  std::vector<double> standalone_power() const;
};

struct SgUtility {
  double revenue_term = 0.0;   ///< alpha1 * sum(price * power)
  double mismatch_term = 0.0;  ///< alpha2 * K * sum |power - supply|
  double total = 0.0;          ///< revenue_term - mismatch_term
};

SgUtility sg_utility(std::span<const double> power,
                     std::span<const double> prices,
                     std::span<const double> supply, double alpha1,
                     double alpha2, double k_norm);

/// Realized market state for one (partition, action) pair.
struct PairOutcome {
  std::vector<std::int64_t> served;  ///< VMs processed at each data center
  std::vector<double> power;
  std::vector<double> prices;
  std::vector<double> payoffs;  ///< Shapley payoff of each provider
  SgUtility utility;
  bool prices_in_band = true;
};

/// Lazily evaluated game for one slot: coalition values, Shapley payoffs,
/// pair outcomes and transition matrices, all memoized.
class SlotGame {
 public:
  SlotGame(SlotInputs inputs, ActionGrid grid,
           std::shared_ptr<const StateSpace> space);

  const SlotInputs& inputs() const noexcept { return in_; }
  const ActionGrid& actions() const noexcept { return grid_; }
  const StateSpace& space() const noexcept { return *space_; }
  std::size_t num_states() const noexcept { return space_->size(); }
  std::size_t num_actions() const noexcept { return grid_.size(); }
  std::size_t num_providers() const noexcept { return in_.num_providers(); }

  /// Bus pricing of every provider under an action.
  const std::vector<BusPricing>& pricing(std::size_t action) const {
    return pricing_.at(action);
  }
  MarketView market(std::size_t action) const;

  const CoalitionEvaluation& coalition(Coalition members, std::size_t action);
  const PayoffVector& shapley(Coalition members, std::size_t action);
  const PairOutcome& outcome(std::size_t state, std::size_t action);
  /// payoffs[state][provider] under an action.
  PayoffTable payoff_table(std::size_t action);
  const TransitionMatrix& transition(std::size_t action);
  TransitionMatrix transition(std::size_t action,
                              const DynamicsParams& params);

 private:
  SlotInputs in_;
  ActionGrid grid_;
  std::shared_ptr<const StateSpace> space_;
  std::vector<std::vector<BusPricing>> pricing_;
  CoalitionCache values_;
  std::mutex mutex_;
  std::vector<std::vector<std::optional<PayoffVector>>> shapley_;  // [a][mask]
  std::vector<std::vector<std::optional<PairOutcome>>> outcomes_;  // [k][a]
  std::vector<std::optional<TransitionMatrix>> transitions_;
};

/// Flattened constrained MDP. Pair index is state * num_actions + action.
struct CmdpModel {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t num_providers = 0;
  std::vector<double> utility;
  std::vector<double> revenue_term;
  std::vector<double> mismatch_term;
  std::vector<double> prices;   ///< [pair * num_providers + i]
  std::vector<double> payoffs;  ///< [pair * num_providers + i]
  std::vector<TransitionMatrix> transitions;  ///< one per action
  double price_lo = 0.0;
  double price_hi = 0.0;

  std::size_t pair(std::size_t state, std::size_t action) const noexcept {
    return state * num_actions + action;
  }

  static CmdpModel from_game(SlotGame& game);
};

/// Occupancy-measure LP: maximize expected utility subject to expected-price
/// bounds per provider, balance rows (the last one dropped as redundant with
/// the normalization), normalization and non-negativity.
lp::LinearProgram build_cmdp_lp(const CmdpModel& model);

struct PricingPolicy {
  std::vector<double> phi;        ///< occupancy measure per pair
  std::vector<double> varphi;     ///< action distribution per state
  std::vector<bool> fallback;     ///< state had zero occupancy mass
  TransitionMatrix induced;       ///< T under the policy
  StationaryDistribution stationary;
  double expected_utility = 0.0;
  std::vector<double> expected_prices;

  double action_prob(std::size_t state, std::size_t action,
                     std::size_t num_actions) const {
    return varphi[state * num_actions + action];
  }
};

/// Conditional action distribution from an optimal occupancy measure. States
/// without mass get the action with the best immediate utility.
PricingPolicy extract_policy(const lp::Solution& solution,
                             const CmdpModel& model);

struct AverageProfits {
  double sg = 0.0;
  double revenue_term = 0.0;
  double mismatch_term = 0.0;
  std::vector<double> cp;
};

AverageProfits average_profits(const PricingPolicy& policy,
                               const CmdpModel& model);

struct IcgResult {
  CmdpModel model;
  lp::Solution lp;
  PricingPolicy policy;
  AverageProfits averages;
};

/// Full interactive-game pipeline for one slot. Throws InfeasibleError when
/// the LP has no feasible policy.
IcgResult icg_solve(SlotGame& game);

struct CentResult {
  std::size_t state = 0;
  std::size_t action = 0;
  PairOutcome outcome;
};

/// Exhaustive argmax of the grid utility over partitions and actions whose
/// prices all lie in the band. Ties go to the lowest (state, action).
CentResult cent_solve(SlotGame& game);

struct NoCoopResult {
  std::size_t action = 0;
  PairOutcome outcome;  ///< singletons partition
  bool price_feasible = true;
};

/// Providers serve their own workload; the grid picks the action with the
/// largest sales revenue whose prices lie in the band (the least violating
/// action when none does).
NoCoopResult nocoop_solve(SlotGame& game);

}  // namespace gridcoal

#endif  // GRIDCOAL_POLICY_HPP
