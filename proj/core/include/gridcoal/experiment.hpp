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

// The per-slot experiment driver.

#ifndef GRIDCOAL_EXPERIMENT_HPP
#define GRIDCOAL_EXPERIMENT_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridcoal/policy.hpp"
#include "gridcoal/scenario.hpp"

namespace gridcoal {

enum class Scheme { kIcg, kCent, kNoCoop };

const char* to_string(Scheme s) noexcept;
/// Accepts "icg", "cent", "nocoop" in any case.
Scheme parse_scheme(const std::string& name);
/// Comma-separated list; duplicates are dropped, order is canonical.
std::vector<Scheme> parse_schemes(const std::string& list);

/// One scheme in one slot.
struct SlotRecord {
  std::size_t slot = 0;
  Scheme scheme = Scheme::kIcg;
  double sg_profit = 0.0;
  double revenue_term = 0.0;
  double mismatch_term = 0.0;
  std::vector<double> cp_profit;  ///< per provider
  std::vector<double> prices;     ///< realized (expected, for ICG)
  /// Partition distribution as (state id, probability); a point mass for
  /// CENT and NoCoop, the stationary distribution for ICG.
  std::vector<std::pair<std::size_t, double>> partitions;
  std::size_t action = 0;  ///< chosen action (CENT, NoCoop)
  bool flagged = false;    ///< ICG fallback states / NoCoop out of band
  std::vector<std::int64_t> served;  ///< VMs processed per data center
};

struct RunReport {
  std::string scenario;
  std::size_t horizon = 0;
  std::size_t num_providers = 0;
  std::vector<Scheme> schemes;
  std::vector<std::string> partition_labels;  ///< by state id
  std::vector<SlotRecord> records;            ///< ordered by slot, then scheme

  const SlotRecord& at(std::size_t slot, Scheme scheme) const;
  bool has(Scheme scheme) const;
  double mean_sg(Scheme scheme) const;
  double mean_cp_total(Scheme scheme) const;
};

/// Failure of one scheme in one slot.
class SlotError : public std::runtime_error {
 public:
  SlotError(std::size_t slot, Scheme scheme, const std::string& what);
  std::size_t slot() const noexcept { return slot_; }
  Scheme scheme() const noexcept { return scheme_; }

 private:
  std::size_t slot_;
  Scheme scheme_;
};

SlotInputs make_slot_inputs(const Scenario& sc, std::size_t slot);
ActionGrid make_action_grid(const Scenario& sc, const SlotInputs& in);
SlotGame make_slot_game(const Scenario& sc, std::size_t slot,
                        std::shared_ptr<const StateSpace> space);

struct ExperimentOptions {
  unsigned threads = 0;  ///< 0: hardware concurrency
  std::vector<std::size_t> slots;  ///< empty: every slot
};

RunReport run_experiment(const Scenario& sc, const std::vector<Scheme>& schemes,
                         const ExperimentOptions& options = {});

}  // namespace gridcoal

#endif  // GRIDCOAL_EXPERIMENT_HPP
