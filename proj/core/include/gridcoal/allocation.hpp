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

// Coalition revenue, cost and value under the optimal VM migration plan.
//
// The energy term of a coalition's cost depends only on per-destination VM
// totals, so the solver searches over those totals and routes the sources to
// them with a min-cost transportation assignment. Small coalitions are solved
// exactly by enumeration; large ones by a scaled negative-cycle descent on a
// convex relaxation of the host power curve followed by integer repair moves.

#ifndef GRIDCOAL_ALLOCATION_HPP
#define GRIDCOAL_ALLOCATION_HPP

#include <cstdint>
#include <functional>
#include <mutex>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "gridcoal/model.hpp"
#include "gridcoal/partition.hpp"

namespace gridcoal {

/// Per-VM migration cost between providers, $ per VM moved in a slot.
class MigrationCostMatrix {
 public:
  MigrationCostMatrix() = default;
  explicit MigrationCostMatrix(std::size_t n) : n_(n), cost_(n * n, 0.0) {}
  MigrationCostMatrix(std::size_t n, std::vector<double> row_major);

  struct TransferModel {
    double dollars_per_gb = 0.001;
    double rate_mbit_per_s = 100.0;
    double mean_seconds = 554.0;
    double sd_seconds = 364.0;
    double min_seconds = 60.0;  ///< draws below this are resampled
  };

  /// cost[i][j] = dollars_per_gb * rate * t_ij with t_ij ~ Normal(mean, sd)
  /// truncated below at min_seconds. Symmetric, zero diagonal.
  static MigrationCostMatrix sample(std::size_t n, const TransferModel& model,
                                    std::mt19937_64& rng);
  static MigrationCostMatrix uniform(std::size_t n, double cost);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return cost_[i * n_ + j];
  }
  double& at(std::size_t i, std::size_t j) { return cost_.at(i * n_ + j); }
  const std::vector<double>& data() const noexcept { return cost_; }

  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> cost_;
};

/// Inputs shared by every coalition of one market snapshot (one slot under one
/// price action). Indexed by provider id; pricing already carries the
/// provider's bus parameters and billing reference.
struct MarketView {
  std::span<const DataCenterSpec> specs;
  std::span<const std::int64_t> workloads;
  std::span<const BusPricing> pricing;
  const MigrationCostMatrix* migration = nullptr;

  std::size_t num_providers() const noexcept { return specs.size(); }
};

/// Migration plan of a coalition. omega(i, j) counts VMs of member i served
/// by member j, with i and j positions in `members`.
struct Allocation {
  std::vector<int> members;
  std::vector<std::int64_t> omega;  ///< row-major |S| x |S|
  std::vector<PowerDraw> draws;     ///< per member, from the column loads
  double objective = 0.0;           ///< coalition cost C(S)

  std::size_t size() const noexcept { return members.size(); }
  std::int64_t at(std::size_t i, std::size_t j) const {
    return omega[i * members.size() + j];
  }
  std::int64_t column_load(std::size_t j) const;
  std::int64_t row_sum(std::size_t i) const;
};

struct CoalitionEvaluation {
  double revenue = 0.0;
  double cost = 0.0;
  double value = 0.0;
  Allocation allocation;
};

struct AllocationOptions {
  /// Coalitions whose total workload exceeds this use the descent solver.
  std::int64_t exact_pivot = 10000;
  /// Exact enumeration is also abandoned when the number of candidate
  /// destination-total vectors exceeds this budget.
  std::uint64_t exact_budget = 200000;
};

double coalition_revenue(Coalition members, const MarketView& market);

/// Energy cost at each member's column load plus off-diagonal migration cost.
double coalition_cost(Coalition members, const Allocation& alloc,
                      const MarketView& market);

/// Minimum-cost feasible migration plan. Throws InfeasibleError when the
/// coalition's demand exceeds its capacity.
Allocation solve_allocation(Coalition members, const MarketView& market,
                            const AllocationOptions& options = {});

/// Exact optimum by enumerating every destination-total vector. Exposed for
/// testing; cost grows combinatorially in the coalition workload.
Allocation solve_allocation_exact(Coalition members, const MarketView& market);

/// Descent solver regardless of size.
Allocation solve_allocation_descent(Coalition members, const MarketView& market);

CoalitionEvaluation evaluate_coalition(Coalition members,
                                       const MarketView& market,
                                       const AllocationOptions& options = {});

/// Thread-safe memo of coalition evaluations keyed by member set, slot and
/// the billing references of the members. Valid because a coalition's value
/// depends only on its own members.
class CoalitionCache {
 public:
  const CoalitionEvaluation& get_or_compute(
      Coalition members, std::size_t slot, const MarketView& market,
      const std::function<CoalitionEvaluation()>& compute);

  std::size_t size() const;

 private:
  struct Key {
    std::uint32_t mask;
    std::size_t slot;
    std::vector<double> deltas;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  mutable std::mutex mutex_;
  // Node-based map: references stay valid across rehashing.
  std::unordered_map<Key, CoalitionEvaluation, KeyHash> entries_;
};

}  // namespace gridcoal

#endif  // GRIDCOAL_ALLOCATION_HPP
